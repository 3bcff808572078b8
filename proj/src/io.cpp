#include "oneshot/io.hpp"

#include <fstream>
#include <sstream>

#include "oneshot/error.hpp"

namespace oneshot {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& source, const std::string& field, const std::string& what) {
  fail(ErrorCode::parse_error, source + ": field '" + field + "': " + what);
}

const json& field(const json& doc, const std::string& source, const std::string& name) {
  if (!doc.is_object()) schema_error(source, name, "document is not a JSON object");
  const auto it = doc.find(name);
  if (it == doc.end()) schema_error(source, name, "missing");
  return *it;
}

Dims parse_dims(const json& doc, const std::string& source) {
  const json& d = field(doc, source, "dims");
  if (!d.is_array() || d.empty()) schema_error(source, "dims", "expected a nonempty array of positive integers");
  Dims dims;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d[i].is_number_integer() || d[i].get<long long>() <= 0)
      schema_error(source, "dims[" + std::to_string(i) + "]", "expected a positive integer");
    dims.push_back(d[i].get<int>());
  }
  return dims;
}

Complex parse_complex(const json& v, const std::string& source, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    schema_error(source, where, "expected a [re, im] pair of numbers");
  return {v[0].get<double>(), v[1].get<double>()};
}

Vector parse_amplitudes(const json& doc, const std::string& source, const std::string& name, int dim) {
  const json& a = field(doc, source, name);
  if (!a.is_array()) schema_error(source, name, "expected an array of [re, im] pairs");
  if (static_cast<int>(a.size()) != dim)
    schema_error(source, name, "has " + std::to_string(a.size()) + " entries, dims require " + std::to_string(dim));
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = parse_complex(a[i], source, name + "[" + std::to_string(i) + "]");
  return v;
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json dims_json(const Dims& dims) { return json(dims); }

template <typename F>
auto with_source(const std::string& source, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    throw Error(e.code(), source + ": " + e.what());
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse_error, path.string() + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace

StateFile parse_state_json(const json& doc, const std::string& source) {
  const json& kind = field(doc, source, "kind");
  if (!kind.is_string()) schema_error(source, "kind", "expected \"pure\" or \"mixed\"");
  const Dims dims = parse_dims(doc, source);
  const int dim = total_dimension(dims);
  std::optional<std::string> label;
  if (const auto it = doc.find("label"); it != doc.end()) {
    if (!it->is_string()) schema_error(source, "label", "expected a string");
    label = it->get<std::string>();
  }

  const std::string k = kind.get<std::string>();
  if (k == "pure") {
    const Vector amps = parse_amplitudes(doc, source, "amplitudes", dim);
    return with_source(source, [&] { return StateFile{PureState(dims, amps), label}; });
  }
  if (k != "mixed") schema_error(source, "kind", "unknown kind '" + k + "'");

  bool subnormalized = false;
  if (const auto it = doc.find("subnormalized"); it != doc.end()) {
    if (!it->is_boolean()) schema_error(source, "subnormalized", "expected a boolean");
    subnormalized = it->get<bool>();
  }
  const json& rows = field(doc, source, "matrix");
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    schema_error(source, "matrix", "expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const std::string where = "matrix[" + std::to_string(r) + "]";
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != dim)
      schema_error(source, where, "expected " + std::to_string(dim) + " entries");
    for (int c = 0; c < dim; ++c)
      m(r, c) = parse_complex(rows[r][c], source, where + "[" + std::to_string(c) + "]");
  }
  return with_source(source, [&] { return StateFile{DensityMatrix(dims, m, subnormalized), label}; });
}

StateFile parse_state_file(const std::filesystem::path& path) { return parse_state_json(read_json(path), path.string()); }

PureEnsemble parse_ensemble_json(const json& doc, const std::string& source) {
  const Dims dims = parse_dims(doc, source);
  const int dim = total_dimension(dims);
  bool subnormalized = false;
  if (const auto it = doc.find("subnormalized"); it != doc.end()) {
    if (!it->is_boolean()) schema_error(source, "subnormalized", "expected a boolean");
    subnormalized = it->get<bool>();
  }
  const json& members = field(doc, source, "members");
  if (!members.is_array() || members.empty()) schema_error(source, "members", "expected a nonempty array");
  std::vector<EnsembleMember> out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const std::string where = "members[" + std::to_string(i) + "]";
    const json& w = field(members[i], source, "weight");
    if (!w.is_number()) schema_error(source, where + ".weight", "expected a number");
    const Vector amps = parse_amplitudes(members[i], source + ": " + where, "amplitudes", dim);
    out.push_back({w.get<double>(), with_source(source + ": " + where, [&] { return PureState(dims, amps); })});
  }
  return with_source(source, [&] { return PureEnsemble(std::move(out), subnormalized); });
}

PureEnsemble parse_ensemble_file(const std::filesystem::path& path) {
  return parse_ensemble_json(read_json(path), path.string());
}

json to_json(const PureState& state, const std::optional<std::string>& label) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) amps.push_back(complex_json(state.amplitudes()[i]));
  json doc{{"kind", "pure"}, {"dims", dims_json(state.dims())}, {"amplitudes", std::move(amps)}};
  if (label) doc["label"] = *label;
  return doc;
}

json to_json(const DensityMatrix& rho, const std::optional<std::string>& label) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < rho.matrix().rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < rho.matrix().cols(); ++c) row.push_back(complex_json(rho.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  json doc{{"kind", "mixed"},
           {"dims", dims_json(rho.dims())},
           {"subnormalized", rho.subnormalized()},
           {"matrix", std::move(rows)}};
  if (label) doc["label"] = *label;
  return doc;
}

json to_json(const PureEnsemble& ensemble) {
  json members = json::array();
  for (const EnsembleMember& m : ensemble.members())
    members.push_back({{"weight", m.weight}, {"amplitudes", to_json(m.state)["amplitudes"]}});
  return {{"dims", dims_json(ensemble.dims())}, {"subnormalized", ensemble.subnormalized()}, {"members", std::move(members)}};
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

DensityMatrix as_density(const ParsedState& state) {
  if (const auto* rho = std::get_if<DensityMatrix>(&state)) return *rho;
  const PureState& phi = std::get<PureState>(state);
  return DensityMatrix(phi.dims(), phi.projector(), !phi.is_normalized());
}

}  // namespace oneshot
