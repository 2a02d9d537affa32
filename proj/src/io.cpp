#include "subalg/io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "subalg/errors.hpp"

namespace subalg {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) bad(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer() || v.get<long long>() < 1) bad(where + "." + key, "expected a positive integer");
  return v.get<int>();
}

std::string csv_cell(const Json& v) {
  std::string s;
  if (v.is_string())
    s = v.get<std::string>();
  else if (v.is_null())
    s = "";
  else
    s = v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

Json matrix_to_json(const Mat& m) {
  Json data = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Mat matrix_from_json(const Json& j, const std::string& where) {
  int r = int_field(j, "rows", where), c = int_field(j, "cols", where);
  const Json& data = field(j, "data", where);
  if (!data.is_array() || data.size() != static_cast<size_t>(r) * c)
    bad(where + ".data", "expected " + std::to_string(r * c) + " entries");
  Mat m(r, c);
  for (size_t k = 0; k < data.size(); ++k) {
    const Json& e = data[k];
    std::string at = where + ".data[" + std::to_string(k) + "]";
    if (e.is_number())
      m(k / c, k % c) = e.get<double>();
    else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
      m(k / c, k % c) = cd(e[0].get<double>(), e[1].get<double>());
    else
      bad(at, "expected [re, im]");
  }
  return m;
}

Json state_to_json(const Mat& rho) {
  Json j = matrix_to_json(rho);
  j["substate"] = rho.trace().real() < 1 - 1e-9;
  return j;
}

Mat state_from_json(const Json& j, const std::string& where) {
  Mat m = matrix_from_json(j, where);
  bool sub = j.value("substate", false);
  try {
    return DensityOperator(m, sub).matrix();
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

Json subalgebra_to_json(const Subalgebra& N) {
  Json blocks = Json::array();
  for (const auto& b : N.blocks()) blocks.push_back({b.m, b.n});
  return {{"dim", N.dim()}, {"blocks", blocks}, {"unitary", matrix_to_json(N.unitary())}};
}

Subalgebra subalgebra_from_json(const Json& j, const std::string& where) {
  if (j.is_object() && j.contains("generators")) {
    const Json& g = j["generators"];
    if (!g.is_array()) bad(where + ".generators", "expected an array");
    std::vector<Mat> gens;
    for (size_t k = 0; k < g.size(); ++k)
      gens.push_back(matrix_from_json(g[k], where + ".generators[" + std::to_string(k) + "]"));
    int dim = j.contains("dim") ? int_field(j, "dim", where) : (gens.empty() ? 0 : static_cast<int>(gens[0].rows()));
    if (dim < 1) bad(where, "generators need a 'dim' when the list is empty");
    DecomposeOptions opts;
    std::string mode = j.value("mode", "algebra");
    if (mode == "commutant")
      opts.mode = GeneratorMode::Commutant;
    else if (mode != "algebra")
      bad(where + ".mode", "expected \"algebra\" or \"commutant\"");
    try {
      return decompose_from_generators(gens, dim, opts);
    } catch (const Error& e) {
      bad(where, e.what());
    }
  }
  int dim = int_field(j, "dim", where);
  const Json& bl = field(j, "blocks", where);
  if (!bl.is_array() || bl.empty()) bad(where + ".blocks", "expected a non-empty array of [m, n]");
  std::vector<Block> blocks;
  for (size_t k = 0; k < bl.size(); ++k) {
    const Json& b = bl[k];
    if (!b.is_array() || b.size() != 2 || !b[0].is_number_integer() || !b[1].is_number_integer() || b[0].get<int>() < 1 ||
        b[1].get<int>() < 1)
      bad(where + ".blocks[" + std::to_string(k) + "]", "expected [m, n] with positive integers");
    blocks.push_back({b[0].get<int>(), b[1].get<int>()});
  }
  Mat u = j.contains("unitary") ? matrix_from_json(j["unitary"], where + ".unitary") : Mat::Identity(dim, dim);
  if (u.rows() != dim || u.cols() != dim) bad(where + ".unitary", "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  if (max_abs(u * u.adjoint() - Mat::Identity(dim, dim)) > 1e-8) bad(where + ".unitary", "not unitary");
  try {
    return Subalgebra(blocks, u);
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

Json channel_to_json(const QuantumChannel& phi) {
  Json kraus = Json::array();
  for (const auto& k : phi.kraus()) kraus.push_back(matrix_to_json(k));
  return {{"dim_in", phi.dim_in()}, {"dim_out", phi.dim_out()}, {"kraus", kraus}};
}

QuantumChannel channel_from_json(const Json& j, const std::string& where) {
  int din = int_field(j, "dim_in", where), dout = int_field(j, "dim_out", where);
  const Json& kr = field(j, "kraus", where);
  if (!kr.is_array() || kr.empty()) bad(where + ".kraus", "expected a non-empty array");
  std::vector<Mat> ks;
  for (size_t k = 0; k < kr.size(); ++k) ks.push_back(matrix_from_json(kr[k], where + ".kraus[" + std::to_string(k) + "]"));
  try {
    return QuantumChannel(din, dout, ks);
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

Json certificate_summary(const SolverCertificate& c) {
  return {{"primal_objective", c.primal_objective}, {"dual_objective", c.dual_objective},
          {"gap", c.gap},
          {"primal_infeasibility", c.primal_infeasibility},
          {"dual_infeasibility", c.dual_infeasibility},
          {"iterations", c.iterations},
          {"tol", c.tol}};
}

Json bits_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json report_to_json(const EntropyReport& r) {
  return {{"quantity", r.quantity}, {"value_bits", bits_to_json(r.value_bits)}, {"n", r.n},
          {"epsilon", r.epsilon},   {"route", r.route},                          {"certificate_gap", r.certificate_gap}};
}

Json duality_row_to_json(const DualityRow& r) {
  return {{"quantity", r.quantity},
          {"epsilon", r.epsilon},
          {"alpha", bits_to_json(r.alpha)},
          {"direct", report_to_json(r.direct)},
          {"dilated", report_to_json(r.dilated)},
          {"difference", r.difference},
          {"tolerance", r.tolerance},
          {"passed", r.passed}};
}

void write_csv(std::ostream& os, const std::vector<Json>& rows) {
  if (rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
  for (size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_cell(keys[i]);
  os << "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_cell(r.contains(keys[i]) ? r[keys[i]] : Json());
    os << "\n";
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into line and column.
    size_t pos = std::min(e.byte == 0 ? 0 : e.byte - 1, text.size());
    int line = 1, col = 1;
    for (size_t i = 0; i < pos; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

}  // namespace subalg
