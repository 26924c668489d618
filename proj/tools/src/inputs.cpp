#include "inputs.hpp"

#include "pbc/errors.hpp"
#include "pbc/io.hpp"

namespace pbclab {
namespace {

template <class F>
auto located(const std::string& path, const std::string& prefix, F&& parse) {
  try {
    return parse();
  } catch (const pbc::ParseError& e) {
    const std::string inner = e.where() == "/" ? "" : e.where();
    throw pbc::ParseError(e.what(), path + ":" + prefix + inner);
  }
}

const Json& required(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw pbc::ParseError(std::string("missing member \"") + key + "\"", path + ":/");
  return j.at(key);
}

pbc::HermitianOperator operator_at(const Json& j, const std::string& path, const std::string& where) {
  return located(path, where, [&] { return pbc::parse_operator(j.dump()); });
}

pbc::DensityOperator state_at(const Json& j, const std::string& path, const std::string& where) {
  const pbc::HermitianOperator op = operator_at(j, path, where);
  try {
    return pbc::DensityOperator(op);
  } catch (const pbc::Error& e) {
    throw pbc::ParseError(e.what(), path + ":" + where);
  }
}

template <class T>
T value_at(const Json& j, const char* key, T fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw pbc::ParseError(e.what(), path + ":/" + key);
  }
}

}  // namespace

Json load_json(const std::string& path) {
  const std::string text = pbc::read_text_file(path);
  return located(path, "", [&] { return Json::parse(pbc::canonical_json(text)); });
}

pbc::HermitianOperator load_operator(const std::string& path) {
  const std::string text = pbc::read_text_file(path);
  return located(path, "", [&] { return pbc::parse_operator(text); });
}

pbc::DensityOperator load_state(const std::string& path) { return state_at(load_json(path), path, ""); }

std::vector<pbc::HermitianOperator> load_operators(const std::vector<std::string>& paths) {
  std::vector<pbc::HermitianOperator> out;
  for (const auto& p : paths) out.push_back(load_operator(p));
  return out;
}

pbc::P2PCodeSpec P2PInput::spec() const {
  if (!resource) throw pbc::PreconditionError("this command needs a \"resource\" in the spec");
  return pbc::P2PCodeSpec{*resource, channel, messages, test, c};
}

P2PInput load_p2p_input(const std::string& path) {
  const Json j = load_json(path);
  const pbc::QuantumChannel ch =
      located(path, "/channel", [&] { return pbc::parse_channel(required(j, "channel", path).dump()); });
  P2PInput in{std::nullopt, ch, 2, 1.0, std::nullopt};
  if (j.contains("resource")) in.resource = state_at(j["resource"], path, "/resource");
  in.messages = value_at<int>(j, "messages", 2, path);
  in.c = value_at<double>(j, "c", 1.0, path);
  if (j.contains("test")) in.test = pbc::BinaryTest{operator_at(j["test"], path, "/test"), std::nullopt, std::nullopt};
  return in;
}

pbc::MacCodeSpec load_mac_spec(const std::string& path) {
  const Json j = load_json(path);
  const Json& rs = required(j, "resources", path);
  if (!rs.is_array() || rs.empty()) throw pbc::ParseError("expected a nonempty array", path + ":/resources");
  std::vector<pbc::DensityOperator> resources;
  for (std::size_t i = 0; i < rs.size(); ++i)
    resources.push_back(state_at(rs[i], path, "/resources/" + std::to_string(i)));
  const pbc::QuantumChannel ch =
      located(path, "/channel", [&] { return pbc::parse_channel(required(j, "channel", path).dump()); });
  pbc::MacCodeSpec spec{std::move(resources), ch, {}, std::nullopt, value_at<double>(j, "c", 1.0, path)};
  spec.sizes = value_at<std::vector<int>>(j, "sizes", std::vector<int>(spec.resources.size(), 1), path);
  if (j.contains("test"))
    spec.test = pbc::BinaryTest{operator_at(j["test"], path, "/test"), std::nullopt, std::nullopt};
  return spec;
}

pbc::CqMac load_cq_mac(const std::string& path) {
  const std::string text = pbc::read_text_file(path);
  return located(path, "", [&] { return pbc::parse_cq_mac(text); });
}

Json operator_json(const pbc::HermitianOperator& op) { return Json::parse(pbc::to_json(op)); }

Json subset_json(unsigned subset, int senders) {
  Json s = Json::array();
  for (int k = 0; k < senders; ++k)
    if (subset & (1u << k)) s.push_back(k + 1);
  return s;
}

}  // namespace pbclab
