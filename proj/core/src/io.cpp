#include "pbc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pbc/errors.hpp"

namespace pbc {
namespace {

using Json = nlohmann::ordered_json;

Json parse_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), "byte " + std::to_string(e.byte));
  }
}

const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError("expected an object", where.empty() ? "/" : where);
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing member \"") + key + "\"", where.empty() ? "/" : where);
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError("expected a number", where);
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError("expected an integer", where);
  return j.get<int>();
}

std::vector<double> number_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError("expected an array of numbers", where);
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "/" + std::to_string(i)));
  return out;
}

Dims dims_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError("expected an array of dimensions", where);
  Dims out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int d = integer(j[i], where + "/" + std::to_string(i));
    if (d < 1) throw ParseError("dimensions must be positive", where + "/" + std::to_string(i));
    out.push_back(d);
  }
  return out;
}

Complex entry(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "/0"), number(j[1], where + "/1")};
  throw ParseError("expected a number or [re, im]", where);
}

Matrix matrix_of(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError("expected a nonempty array of rows", where);
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  Matrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string rw = where + "/" + std::to_string(r);
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw ParseError("expected a row array", rw);
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ParseError("ragged matrix rows", rw);
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry(row[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c));
  }
  return m;
}

HermitianOperator operator_of(const Json& j, const std::string& where) {
  const Matrix m = matrix_of(member(j, "matrix", where), where + "/matrix");
  Dims dims;
  if (j.contains("dims")) dims = dims_list(j["dims"], where + "/dims");
  else dims = {static_cast<int>(m.rows())};
  try {
    return HermitianOperator(m, dims);
  } catch (const Error& e) {
    throw ParseError(e.what(), where.empty() ? "/" : where);
  }
}

QuantumChannel channel_of(const Json& j, const std::string& where) {
  const Json& kraus = member(j, "kraus", where);
  if (!kraus.is_array() || kraus.empty()) throw ParseError("expected a nonempty Kraus list", where + "/kraus");
  std::vector<Matrix> ks;
  for (std::size_t i = 0; i < kraus.size(); ++i) ks.push_back(matrix_of(kraus[i], where + "/kraus/" + std::to_string(i)));
  Dims in = j.contains("in_dims") ? dims_list(j["in_dims"], where + "/in_dims") : Dims{static_cast<int>(ks[0].cols())};
  Dims out = j.contains("out_dims") ? dims_list(j["out_dims"], where + "/out_dims") : Dims{static_cast<int>(ks[0].rows())};
  try {
    return QuantumChannel(std::move(ks), std::move(in), std::move(out));
  } catch (const Error& e) {
    throw ParseError(e.what(), where.empty() ? "/" : where);
  }
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json operator_json(const HermitianOperator& op) {
  Json j;
  j["dims"] = op.dims();
  j["matrix"] = matrix_json(op.matrix());
  return j;
}

void write_canonical(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        write_canonical(it.value(), out);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write_canonical(j[i], out);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float: out += format_double(j.get<double>()); break;
    default: out += j.dump(); break;
  }
}

std::string canonical(const Json& j) {
  std::string out;
  write_canonical(j, out);
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string canonical_json(std::string_view text) { return canonical(parse_text(text)); }

HermitianOperator parse_operator(std::string_view text) { return operator_of(parse_text(text), ""); }

QuantumChannel parse_channel(std::string_view text) { return channel_of(parse_text(text), ""); }

CqMac parse_cq_mac(std::string_view text) {
  const Json j = parse_text(text);
  const std::vector<double> px = number_list(member(j, "p_x", ""), "/p_x");
  const std::vector<double> py = number_list(member(j, "p_y", ""), "/p_y");
  const Json& outs = member(j, "outputs", "");
  if (!outs.is_object()) throw ParseError("expected an object keyed by \"x,y\"", "/outputs");
  std::vector<std::vector<std::optional<DensityOperator>>> table(px.size(),
                                                                 std::vector<std::optional<DensityOperator>>(py.size()));
  for (auto it = outs.begin(); it != outs.end(); ++it) {
    const std::string where = "/outputs/" + it.key();
    int x = -1;
    int y = -1;
    char tail = 0;
    if (std::sscanf(it.key().c_str(), "%d,%d%c", &x, &y, &tail) != 2 || x < 0 || y < 0 ||
        x >= static_cast<int>(px.size()) || y >= static_cast<int>(py.size()))
      throw ParseError("output key must be \"x,y\" within the alphabets", where);
    const HermitianOperator op = operator_of(it.value(), where);
    try {
      table[x][y] = DensityOperator(op);
    } catch (const Error& e) {
      throw ParseError(e.what(), where);
    }
  }
  std::vector<std::vector<DensityOperator>> outputs(px.size());
  for (std::size_t x = 0; x < px.size(); ++x)
    for (std::size_t y = 0; y < py.size(); ++y) {
      if (!table[x][y]) throw ParseError("missing output " + std::to_string(x) + "," + std::to_string(y), "/outputs");
      outputs[x].push_back(*table[x][y]);
    }
  try {
    return CqMac(std::move(outputs), px, py);
  } catch (const Error& e) {
    throw ParseError(e.what(), "/");
  }
}

RateRegion parse_rate_region(std::string_view text) {
  const Json j = parse_text(text);
  RateRegion r;
  r.senders = integer(member(j, "senders", ""), "/senders");
  if (r.senders < 1 || r.senders > 30) throw ParseError("sender count out of range", "/senders");
  if (j.contains("family")) r.family = j["family"].get<std::string>();
  if (j.contains("conjectured")) r.conjectured = j["conjectured"].get<bool>();
  const Json& cs = member(j, "constraints", "");
  if (!cs.is_array()) throw ParseError("expected an array", "/constraints");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const std::string where = "/constraints/" + std::to_string(i);
    RateConstraint c;
    const Json& subset = member(cs[i], "subset", where);
    if (!subset.is_array() || subset.empty()) throw ParseError("expected a nonempty sender list", where + "/subset");
    for (std::size_t k = 0; k < subset.size(); ++k) {
      const int s = integer(subset[k], where + "/subset/" + std::to_string(k));
      if (s < 1 || s > r.senders) throw ParseError("sender index out of range", where + "/subset/" + std::to_string(k));
      c.subset |= 1u << (s - 1);
    }
    c.bound = number(member(cs[i], "bound", where), where + "/bound");
    if (cs[i].contains("label")) c.label = cs[i]["label"].get<std::string>();
    if (cs[i].contains("alternate_label")) c.alternate_label = cs[i]["alternate_label"].get<std::string>();
    r.constraints.push_back(std::move(c));
  }
  return r;
}

std::string to_json(const HermitianOperator& op) { return canonical(operator_json(op)); }

std::string to_json(const QuantumChannel& channel) {
  Json j;
  Json ks = Json::array();
  for (const Matrix& k : channel.kraus()) ks.push_back(matrix_json(k));
  j["kraus"] = std::move(ks);
  j["in_dims"] = channel.in_dims();
  j["out_dims"] = channel.out_dims();
  return canonical(j);
}

std::string to_json(const CqMac& mac) {
  Json j;
  j["p_x"] = mac.p_x();
  j["p_y"] = mac.p_y();
  Json outs = Json::object();
  for (int x = 0; x < mac.x_size(); ++x)
    for (int y = 0; y < mac.y_size(); ++y)
      outs[std::to_string(x) + "," + std::to_string(y)] = operator_json(mac.output(x, y).op());
  j["outputs"] = std::move(outs);
  return canonical(j);
}

std::string to_json(const RateRegion& region) {
  Json j;
  j["senders"] = region.senders;
  j["family"] = region.family;
  j["conjectured"] = region.conjectured;
  Json cs = Json::array();
  for (const auto& c : region.constraints) {
    Json cj;
    Json subset = Json::array();
    for (int k = 0; k < region.senders; ++k)
      if (c.subset & (1u << k)) subset.push_back(k + 1);
    cj["subset"] = std::move(subset);
    cj["bound"] = c.bound;
    cj["label"] = c.label;
    cj["alternate_label"] = c.alternate_label;
    cs.push_back(std::move(cj));
  }
  j["constraints"] = std::move(cs);
  return canonical(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pbc
