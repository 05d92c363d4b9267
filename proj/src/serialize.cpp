#include "kframes/serialize.hpp"

#include <fstream>
#include <sstream>

namespace kframes {

namespace {

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::ParseError, std::string("missing key '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void optional_into(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

Json matrix_to_json(const CMat& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

CMat matrix_from_json(const Json& j) {
  const auto rows = required<long long>(j, "rows");
  const auto cols = required<long long>(j, "cols");
  if (rows < 1 || cols < 1) throw Error(ErrorCode::ParseError, "rows and cols must be positive");
  const auto re = required<std::vector<double>>(j, "re");
  const auto im = required<std::vector<double>>(j, "im");
  const auto expected = static_cast<std::size_t>(rows * cols);
  if (re.size() != expected || im.size() != expected) {
    throw Error(ErrorCode::ParseError, "re/im must each hold rows*cols entries");
  }
  CMat m(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i) {
    for (Index c = 0; c < cols; ++c, ++k) m(i, c) = Complex(re[k], im[k]);
  }
  require_finite(m, "matrix");
  return m;
}

Json frame_to_json(const KFrame& f) {
  Json j = matrix_to_json(f.vectors());
  j["dim"] = f.dim();
  j["count"] = f.count();
  j["label"] = f.label();
  return j;
}

KFrame frame_from_json(const Json& j) {
  CMat m = matrix_from_json(j);
  if (j.contains("dim") && required<long long>(j, "dim") != m.rows()) {
    throw Error(ErrorCode::ParseError, "frame 'dim' disagrees with 'rows'");
  }
  if (j.contains("count") && required<long long>(j, "count") != m.cols()) {
    throw Error(ErrorCode::ParseError, "frame 'count' disagrees with 'cols'");
  }
  std::string label;
  optional_into(j, "label", label);
  return KFrame(std::move(m), std::move(label));
}

Json gen_config_to_json(const GenConfig& cfg) {
  return Json{{"seed", cfg.seed},
              {"dim", cfg.dim},
              {"count", cfg.count},
              {"k_rank", cfg.k_rank},
              {"trials", cfg.trials},
              {"tol", cfg.tol},
              {"subset_policy", to_string(cfg.subset_policy)},
              {"sv_min", cfg.sv_min},
              {"sv_max", cfg.sv_max}};
}

GenConfig gen_config_from_json(const Json& j, GenConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "config must be a JSON object");
  optional_into(j, "seed", base.seed);
  optional_into(j, "dim", base.dim);
  optional_into(j, "count", base.count);
  optional_into(j, "k_rank", base.k_rank);
  optional_into(j, "trials", base.trials);
  optional_into(j, "tol", base.tol);
  optional_into(j, "sv_min", base.sv_min);
  optional_into(j, "sv_max", base.sv_max);
  if (j.contains("subset_policy")) base.subset_policy = parse_subset_policy(required<std::string>(j, "subset_policy"));
  return base;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << text;
}

}  // namespace kframes
