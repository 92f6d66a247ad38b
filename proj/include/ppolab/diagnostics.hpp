#ifndef PPOLAB_DIAGNOSTICS_HPP_
#define PPOLAB_DIAGNOSTICS_HPP_

#include <cstddef>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ppolab/errors.hpp"
#include "ppolab/surrogate.hpp"

namespace ppolab {

// Prints a double with 12 significant digits (the documented export
// precision), locale-independent.
inline std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Direction tallies split by advantage sign. Zero-advantage samples are
// neutral and excluded from the denominators; w == 1 samples with a
// nonzero advantage stay in the denominator but count as neither right
// nor wrong (the wrong-direction predicate is a strict inequality).
// Mergeable: fields are sums, means are recomputed on read.
struct DirectionStats {
  long long n_pos = 0, n_neg = 0;
  long long wrong_pos = 0, wrong_neg = 0;
  long long strict_pos = 0, strict_neg = 0;
  double sq_dev_pos = 0.0, sq_dev_neg = 0.0;  // sum of (w-1)^2 by sign

  void add(double w, double advantage, double beta) {
    Direction d = classify_direction(w, advantage, beta);
    if (advantage > 0.0) {
      n_pos += 1;
      sq_dev_pos += (w - 1.0) * (w - 1.0);
      if (d == Direction::kWrong || d == Direction::kStrictWrong) wrong_pos += 1;
      if (d == Direction::kStrictWrong) strict_pos += 1;
    } else if (advantage < 0.0) {
      n_neg += 1;
      sq_dev_neg += (w - 1.0) * (w - 1.0);
      if (d == Direction::kWrong || d == Direction::kStrictWrong) wrong_neg += 1;
      if (d == Direction::kStrictWrong) strict_neg += 1;
    }
  }

  void merge(const DirectionStats& other) {
    n_pos += other.n_pos;
    n_neg += other.n_neg;
    wrong_pos += other.wrong_pos;
    wrong_neg += other.wrong_neg;
    strict_pos += other.strict_pos;
    strict_neg += other.strict_neg;
    sq_dev_pos += other.sq_dev_pos;
    sq_dev_neg += other.sq_dev_neg;
  }

  long long total() const { return n_pos + n_neg; }

  std::optional<double> frac_wrong_pos() const {
    if (n_pos == 0) return std::nullopt;
    return static_cast<double>(wrong_pos) / static_cast<double>(n_pos);
  }
  std::optional<double> frac_wrong_neg() const {
    if (n_neg == 0) return std::nullopt;
    return static_cast<double>(wrong_neg) / static_cast<double>(n_neg);
  }
  std::optional<double> frac_strict_pos() const {
    if (n_pos == 0) return std::nullopt;
    return static_cast<double>(strict_pos) / static_cast<double>(n_pos);
  }
  std::optional<double> frac_strict_neg() const {
    if (n_neg == 0) return std::nullopt;
    return static_cast<double>(strict_neg) / static_cast<double>(n_neg);
  }
  std::optional<double> mse_pos() const {
    if (n_pos == 0) return std::nullopt;
    return sq_dev_pos / static_cast<double>(n_pos);
  }
  std::optional<double> mse_neg() const {
    if (n_neg == 0) return std::nullopt;
    return sq_dev_neg / static_cast<double>(n_neg);
  }
};

inline DirectionStats direction_stats(std::span<const double> ratios,
                                      std::span<const double> advantages,
                                      double beta) {
  if (ratios.size() != advantages.size())
    throw ShapeError("direction_stats: array length mismatch");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw ConfigError("direction_stats: beta must lie in [0,1]");
  DirectionStats s;
  for (std::size_t i = 0; i < ratios.size(); ++i)
    s.add(ratios[i], advantages[i], beta);
  return s;
}

// Mean of (w-1)^2 over positive- and negative-advantage samples. A sign
// class with no samples reports absent, not zero.
inline std::pair<std::optional<double>, std::optional<double>> mse_from_one(
    std::span<const double> ratios, std::span<const double> advantages) {
  if (ratios.size() != advantages.size())
    throw ShapeError("mse_from_one: array length mismatch");
  DirectionStats s = direction_stats(ratios, advantages, 0.0);
  return {s.mse_pos(), s.mse_neg()};
}

// Uniform bins over [lo, hi); samples outside the range land in the
// nearest edge bin, so counts are conserved. Half-open bins, final bin
// closed on the right.
struct Histogram {
  std::vector<double> bin_edges;  // n_bins + 1, strictly increasing
  std::vector<long long> counts;

  void add(double x) {
    const std::size_t n = counts.size();
    double lo = bin_edges.front(), hi = bin_edges.back();
    double width = (hi - lo) / static_cast<double>(n);
    long long k = static_cast<long long>(std::floor((x - lo) / width));
    if (k < 0) k = 0;
    if (k >= static_cast<long long>(n)) k = static_cast<long long>(n) - 1;
    counts[static_cast<std::size_t>(k)] += 1;
  }

  long long total() const {
    long long t = 0;
    for (long long c : counts) t += c;
    return t;
  }
};

inline Histogram make_histogram(std::size_t n_bins, double lo, double hi) {
  if (n_bins < 1) throw ConfigError("histogram: need at least one bin");
  if (!(lo < hi)) throw ConfigError("histogram: empty range");
  Histogram h;
  h.counts.assign(n_bins, 0);
  h.bin_edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    h.bin_edges[i] =
        lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
  return h;
}

// Ratio histograms split by advantage sign. Zero-advantage samples have
// no sign and are dropped, mirroring the direction statistics.
inline std::pair<Histogram, Histogram> histogram(
    std::span<const double> ratios, std::span<const double> advantages,
    std::size_t n_bins, double lo, double hi) {
  if (ratios.size() != advantages.size())
    throw ShapeError("histogram: array length mismatch");
  Histogram pos = make_histogram(n_bins, lo, hi);
  Histogram neg = make_histogram(n_bins, lo, hi);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    if (advantages[i] > 0.0)
      pos.add(ratios[i]);
    else if (advantages[i] < 0.0)
      neg.add(ratios[i]);
  }
  return {std::move(pos), std::move(neg)};
}

// ---- exports ----

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot open for writing: " + path);
  out << body;
  if (!out) throw NumericError("write failed: " + path);
}

inline nlohmann::json to_json(const DirectionStats& s) {
  nlohmann::json j;
  j["n_pos"] = s.n_pos;
  j["n_neg"] = s.n_neg;
  j["wrong_pos"] = s.wrong_pos;
  j["wrong_neg"] = s.wrong_neg;
  j["strict_pos"] = s.strict_pos;
  j["strict_neg"] = s.strict_neg;
  auto put = [&j](const char* key, std::optional<double> v) {
    if (v)
      j[key] = *v;
    else
      j[key] = nullptr;
  };
  put("frac_wrong_pos", s.frac_wrong_pos());
  put("frac_wrong_neg", s.frac_wrong_neg());
  put("frac_strict_pos", s.frac_strict_pos());
  put("frac_strict_neg", s.frac_strict_neg());
  put("mse_pos", s.mse_pos());
  put("mse_neg", s.mse_neg());
  return j;
}

inline constexpr const char* kDirectionStatsCsvHeader =
    "n_pos,n_neg,wrong_pos,wrong_neg,strict_pos,strict_neg,"
    "frac_wrong_pos,frac_wrong_neg,frac_strict_pos,frac_strict_neg,"
    "mse_pos,mse_neg";

inline std::string to_csv(const DirectionStats& s) {
  auto opt = [](std::optional<double> v) {
    return v ? format_g12(*v) : std::string();
  };
  std::string row;
  row += std::to_string(s.n_pos) + "," + std::to_string(s.n_neg) + ",";
  row += std::to_string(s.wrong_pos) + "," + std::to_string(s.wrong_neg) + ",";
  row += std::to_string(s.strict_pos) + "," + std::to_string(s.strict_neg) + ",";
  row += opt(s.frac_wrong_pos()) + "," + opt(s.frac_wrong_neg()) + ",";
  row += opt(s.frac_strict_pos()) + "," + opt(s.frac_strict_neg()) + ",";
  row += opt(s.mse_pos()) + "," + opt(s.mse_neg());
  return std::string(kDirectionStatsCsvHeader) + "\n" + row + "\n";
}

inline void export_direction_stats(const DirectionStats& s,
                                   const std::string& path,
                                   const std::string& format) {
  if (format == "csv") {
    write_file(path, to_csv(s));
  } else if (format == "json") {
    write_file(path, to_json(s).dump(2) + "\n");
  } else {
    throw ConfigError("unknown export format '" + format + "'");
  }
}

inline nlohmann::json to_json(const Histogram& h) {
  nlohmann::json j;
  j["bin_edges"] = h.bin_edges;
  j["counts"] = h.counts;
  return j;
}

inline std::string to_csv(const Histogram& h) {
  std::string body = "bin_lo,bin_hi,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    body += format_g12(h.bin_edges[i]) + "," + format_g12(h.bin_edges[i + 1]) +
            "," + std::to_string(h.counts[i]) + "\n";
  }
  return body;
}

inline void export_histogram(const Histogram& h, const std::string& path,
                             const std::string& format) {
  if (format == "csv") {
    write_file(path, to_csv(h));
  } else if (format == "json") {
    write_file(path, to_json(h).dump(2) + "\n");
  } else {
    throw ConfigError("unknown export format '" + format + "'");
  }
}

inline DirectionStats direction_stats_from_json(const nlohmann::json& j) {
  DirectionStats s;
  s.n_pos = j.at("n_pos").get<long long>();
  s.n_neg = j.at("n_neg").get<long long>();
  s.wrong_pos = j.at("wrong_pos").get<long long>();
  s.wrong_neg = j.at("wrong_neg").get<long long>();
  s.strict_pos = j.at("strict_pos").get<long long>();
  s.strict_neg = j.at("strict_neg").get<long long>();
  if (!j.at("mse_pos").is_null())
    s.sq_dev_pos = j.at("mse_pos").get<double>() * static_cast<double>(s.n_pos);
  if (!j.at("mse_neg").is_null())
    s.sq_dev_neg = j.at("mse_neg").get<double>() * static_cast<double>(s.n_neg);
  return s;
}

}  // namespace ppolab

#endif  // PPOLAB_DIAGNOSTICS_HPP_
