#ifndef PPOLAB_CHECKPOINT_HPP_
#define PPOLAB_CHECKPOINT_HPP_

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "ppolab/errors.hpp"
#include "ppolab/param_vector.hpp"

namespace ppolab {

// Text checkpoint, one named slice per section. Values are written as
// C hexfloats, which round-trip doubles exactly:
//
//   ppolab-checkpoint 1
//   slices <n>
//   slice <name> <rows> <cols>
//   <one hexfloat per line, rows*cols lines>
inline std::string checkpoint_to_string(const ParamVector& params) {
  std::string out = "ppolab-checkpoint 1\n";
  out += "slices " + std::to_string(params.slices().size()) + "\n";
  char buf[64];
  for (std::size_t s = 0; s < params.slices().size(); ++s) {
    const SliceSpec& spec = params.slices()[s];
    out += "slice " + spec.name + " " + std::to_string(spec.rows) + " " +
           std::to_string(spec.cols) + "\n";
    for (double v : params.slice(s)) {
      std::snprintf(buf, sizeof buf, "%a\n", v);
      out += buf;
    }
  }
  return out;
}

inline void save_checkpoint(const ParamVector& params,
                            const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw NumericError("cannot open checkpoint for writing: " + path);
  out << checkpoint_to_string(params);
  if (!out) throw NumericError("checkpoint write failed: " + path);
}

inline ParamVector load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NumericError("cannot open checkpoint: " + path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "ppolab-checkpoint" || version != 1)
    throw NumericError("not a ppolab checkpoint: " + path);
  std::string kw;
  std::size_t n_slices = 0;
  in >> kw >> n_slices;
  if (kw != "slices") throw NumericError("malformed checkpoint: " + path);

  ParamVector params;
  std::vector<std::vector<double>> data;
  for (std::size_t s = 0; s < n_slices; ++s) {
    std::string name;
    std::size_t rows = 0, cols = 0;
    in >> kw >> name >> rows >> cols;
    if (kw != "slice") throw NumericError("malformed checkpoint: " + path);
    std::vector<double> vals(rows * cols);
    for (double& v : vals) {
      std::string tok;
      in >> tok;
      if (!in) throw NumericError("truncated checkpoint: " + path);
      v = std::strtod(tok.c_str(), nullptr);
    }
    params.add_slice(name, rows, cols);
    data.push_back(std::move(vals));
  }
  params.finalize();
  for (std::size_t s = 0; s < data.size(); ++s) {
    auto dst = params.slice(s);
    std::copy(data[s].begin(), data[s].end(), dst.begin());
  }
  return params;
}

}  // namespace ppolab

#endif  // PPOLAB_CHECKPOINT_HPP_
