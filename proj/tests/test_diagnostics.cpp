#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppolab/diagnostics.hpp"
#include "ppolab/rng.hpp"

using namespace ppolab;
using nlohmann::json;

namespace {

// Minimal structural validator covering the subset of JSON Schema the
// published schema files use: type / properties / required /
// additionalProperties / items / minimum / maximum / minItems.
bool validates(const json& instance, const json& schema) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    auto matches = [&](const std::string& name) {
      if (name == "object") return instance.is_object();
      if (name == "array") return instance.is_array();
      if (name == "integer") return instance.is_number_integer();
      if (name == "number") return instance.is_number();
      if (name == "string") return instance.is_string();
      if (name == "null") return instance.is_null();
      if (name == "boolean") return instance.is_boolean();
      return false;
    };
    bool ok = false;
    if (t.is_string()) {
      ok = matches(t.get<std::string>());
    } else {
      for (const auto& name : t)
        if (matches(name.get<std::string>())) ok = true;
    }
    if (!ok) return false;
  }
  if (instance.is_number() && !instance.is_null()) {
    if (schema.contains("minimum") &&
        instance.get<double>() < schema["minimum"].get<double>())
      return false;
    if (schema.contains("maximum") &&
        instance.get<double>() > schema["maximum"].get<double>())
      return false;
  }
  if (instance.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!instance.contains(key.get<std::string>())) return false;
    if (schema.contains("properties")) {
      for (auto it = instance.begin(); it != instance.end(); ++it) {
        if (schema["properties"].contains(it.key())) {
          if (!validates(it.value(), schema["properties"][it.key()]))
            return false;
        } else if (schema.value("additionalProperties", true) == false) {
          return false;
        }
      }
    }
  }
  if (instance.is_array()) {
    if (schema.contains("minItems") &&
        instance.size() < schema["minItems"].get<std::size_t>())
      return false;
    if (schema.contains("items"))
      for (const auto& el : instance)
        if (!validates(el, schema["items"])) return false;
  }
  return true;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string repo_schema(const std::string& name) {
  // tests/data -> ../../docs/schemas
  std::filesystem::path data_dir(PPOLAB_TEST_DATA_DIR);
  return (data_dir.parent_path().parent_path() / "docs" / "schemas" / name)
      .string();
}

}  // namespace

TEST_CASE("direction_stats spec example") {
  std::vector<double> ratios{0.7, 1.1, 1.3};
  std::vector<double> advs{1.0, 1.0, -1.0};
  DirectionStats s = direction_stats(ratios, advs, 0.2);
  CHECK(s.n_pos == 2);
  CHECK(s.n_neg == 1);
  CHECK(s.strict_pos == 1);
  CHECK(s.strict_neg == 1);
  CHECK(*s.frac_strict_pos() == Catch::Approx(0.5));
  CHECK(*s.frac_strict_neg() == Catch::Approx(1.0));

  std::vector<double> ones{1.0, 1.0, 1.0};
  DirectionStats z = direction_stats(ones, advs, 0.2);
  CHECK(*z.frac_wrong_pos() == 0.0);
  CHECK(*z.frac_wrong_neg() == 0.0);
  CHECK(z.n_pos == 2);  // w=1 with nonzero advantage stays in denominators

  std::vector<double> short_adv{1.0};
  CHECK_THROWS_AS(direction_stats(ones, short_adv, 0.2), ShapeError);
  CHECK_THROWS_AS(direction_stats(ratios, advs, 1.5), ConfigError);
}

TEST_CASE("direction_stats matches scalar counting oracle") {
  Rng rng(500);
  const std::size_t n = 100000;
  std::vector<double> ratios(n), advs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ratios[i] = std::exp(0.25 * rng.normal());  // lognormal around 1
    advs[i] = rng.uniform() < 0.5 ? 1.0 : -1.0;
  }
  const double beta = 0.15;
  DirectionStats s = direction_stats(ratios, advs, beta);

  long long n_pos = 0, n_neg = 0, wrong_pos = 0, wrong_neg = 0,
            strict_pos = 0, strict_neg = 0;
  double sq_pos = 0.0, sq_neg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = ratios[i], a = advs[i];
    if (a > 0) {
      ++n_pos;
      sq_pos += (w - 1) * (w - 1);
      if (w < 1) ++wrong_pos;
      if (w < 1 - beta) ++strict_pos;
    } else {
      ++n_neg;
      sq_neg += (w - 1) * (w - 1);
      if (w > 1) ++wrong_neg;
      if (w > 1 + beta) ++strict_neg;
    }
  }
  CHECK(s.n_pos == n_pos);
  CHECK(s.n_neg == n_neg);
  CHECK(s.wrong_pos == wrong_pos);
  CHECK(s.wrong_neg == wrong_neg);
  CHECK(s.strict_pos == strict_pos);
  CHECK(s.strict_neg == strict_neg);
  CHECK(*s.mse_pos() == Catch::Approx(sq_pos / n_pos).epsilon(1e-12));
  CHECK(*s.mse_neg() == Catch::Approx(sq_neg / n_neg).epsilon(1e-12));
}

TEST_CASE("mse_from_one") {
  std::vector<double> ratios{0.8, 1.2};
  std::vector<double> advs{1.0, 1.0};
  auto [pos, neg] = mse_from_one(ratios, advs);
  REQUIRE(pos.has_value());
  CHECK(*pos == Catch::Approx(0.04).margin(1e-15));
  CHECK(!neg.has_value());  // absent, not zero

  std::vector<double> ones{1.0, 1.0};
  std::vector<double> mixed{1.0, -1.0};
  auto [p2, n2] = mse_from_one(ones, mixed);
  CHECK(*p2 == 0.0);
  CHECK(*n2 == 0.0);

  Rng rng(7);
  std::vector<double> r(1000), a(1000);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = rng.uniform(0.0, 2.0);
    a[i] = rng.normal();
  }
  auto [p3, n3] = mse_from_one(r, a);
  double sp = 0, sn = 0;
  long long cp = 0, cn = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (a[i] > 0) {
      sp += (r[i] - 1) * (r[i] - 1);
      ++cp;
    } else if (a[i] < 0) {
      sn += (r[i] - 1) * (r[i] - 1);
      ++cn;
    }
  }
  CHECK(*p3 == Catch::Approx(sp / cp).margin(1e-12));
  CHECK(*n3 == Catch::Approx(sn / cn).margin(1e-12));
}

TEST_CASE("scale-free classification") {
  Rng rng(600);
  std::vector<double> ratios(500), advs(500);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    ratios[i] = rng.uniform(0.0, 2.0);
    advs[i] = rng.normal();
  }
  DirectionStats a = direction_stats(ratios, advs, 0.2);
  std::vector<double> scaled = advs;
  for (double& x : scaled) x *= 123.456;
  DirectionStats b = direction_stats(ratios, scaled, 0.2);
  CHECK(a.n_pos == b.n_pos);
  CHECK(a.wrong_pos == b.wrong_pos);
  CHECK(a.strict_pos == b.strict_pos);
  CHECK(a.n_neg == b.n_neg);
  CHECK(a.wrong_neg == b.wrong_neg);
  CHECK(a.strict_neg == b.strict_neg);
}

TEST_CASE("histogram boundary convention and conservation") {
  // Half-open bins [lo, hi): w = 1 over [0, 2) with 2 bins lands in the
  // upper bin.
  std::vector<double> one{1.0};
  std::vector<double> adv{1.0};
  auto [pos, neg] = histogram(one, adv, 2, 0.0, 2.0);
  CHECK(pos.counts[0] == 0);
  CHECK(pos.counts[1] == 1);
  CHECK(neg.total() == 0);

  std::vector<double> empty_r, empty_a;
  auto [p2, n2] = histogram(empty_r, empty_a, 4, 0.0, 2.0);
  CHECK(p2.total() == 0);
  CHECK(n2.total() == 0);

  // Out-of-range samples clamp into edge bins; totals are conserved.
  Rng rng(31);
  std::vector<double> r(5000), a(5000);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = rng.uniform(-0.5, 3.0);
    a[i] = rng.uniform() < 0.5 ? 1.0 : -1.0;
  }
  auto [p3, n3] = histogram(r, a, 10, 0.0, 2.0);
  CHECK(p3.total() + n3.total() == 5000);

  CHECK_THROWS_AS(make_histogram(0, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_histogram(4, 1.0, 1.0), ConfigError);
}

TEST_CASE("histogram of uniform samples is flat within binomial tolerance") {
  Rng rng(71);
  std::vector<double> r(10000), a(10000, 1.0);
  for (double& x : r) x = rng.uniform(0.0, 2.0);
  auto [pos, neg] = histogram(r, a, 20, 0.0, 2.0);
  CHECK(neg.total() == 0);
  const double expectation = 500.0;
  const double tol = 5.0 * std::sqrt(500.0 * 0.95);
  for (long long c : pos.counts)
    CHECK(std::abs(static_cast<double>(c) - expectation) <= tol);
}

TEST_CASE("direction stats export round-trip and schema") {
  Rng rng(81);
  std::vector<double> r(300), a(300);
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = rng.uniform(0.3, 1.8);
    a[i] = rng.normal();
  }
  DirectionStats s = direction_stats(r, a, 0.2);

  std::string jpath = "/tmp/ppolab_stats.json";
  export_direction_stats(s, jpath, "json");
  json loaded = load_json(jpath);
  DirectionStats back = direction_stats_from_json(loaded);
  CHECK(back.n_pos == s.n_pos);
  CHECK(back.wrong_neg == s.wrong_neg);
  CHECK(back.strict_pos == s.strict_pos);
  CHECK(*back.mse_pos() == Catch::Approx(*s.mse_pos()).epsilon(1e-12));

  json schema = load_json(repo_schema("direction_stats.schema.json"));
  CHECK(validates(loaded, schema));

  // CSV header matches the documented schema byte-for-byte.
  std::string cpath = "/tmp/ppolab_stats.csv";
  export_direction_stats(s, cpath, "csv");
  std::ifstream in(cpath);
  std::string header;
  std::getline(in, header);
  CHECK(header == std::string(kDirectionStatsCsvHeader));

  CHECK_THROWS_AS(export_direction_stats(s, "/tmp/x", "xml"), ConfigError);
  CHECK_THROWS_AS(export_direction_stats(s, "/nonexistent_dir_xyz/s.json", "json"),
                  NumericError);
}

TEST_CASE("histogram export validates against published schema") {
  Rng rng(91);
  std::vector<double> r(200), a(200, 1.0);
  for (double& x : r) x = rng.uniform(0.0, 2.0);
  auto [pos, neg] = histogram(r, a, 8, 0.0, 2.0);
  std::string jpath = "/tmp/ppolab_hist.json";
  export_histogram(pos, jpath, "json");
  json loaded = load_json(jpath);
  json schema = load_json(repo_schema("histogram.schema.json"));
  CHECK(validates(loaded, schema));

  // Bin edges are strictly increasing and explicit in the export.
  auto edges = loaded["bin_edges"].get<std::vector<double>>();
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    CHECK(edges[i] < edges[i + 1]);
}

TEST_CASE("proportions stay in bounds on merged shards") {
  Rng rng(101);
  DirectionStats merged;
  for (int shard = 0; shard < 7; ++shard) {
    std::vector<double> r(100), a(100);
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = rng.uniform(0.0, 2.5);
      a[i] = rng.normal();
    }
    merged.merge(direction_stats(r, a, 0.25));
  }
  CHECK(*merged.frac_wrong_pos() >= 0.0);
  CHECK(*merged.frac_wrong_pos() <= 1.0);
  CHECK(merged.strict_pos <= merged.wrong_pos);
  CHECK(merged.strict_neg <= merged.wrong_neg);
  CHECK(merged.total() == 700);
}
