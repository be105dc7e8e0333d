#include "luqca/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "luqca/compiler.hpp"

namespace luqca {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      rows.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return json{{"dim", m.rows()}, {"entries", rows}};
}

Matrix matrix_from_json(const json& j) {
  const std::int64_t dim = j.at("dim").get<std::int64_t>();
  const auto& entries = j.at("entries");
  if (static_cast<std::int64_t>(entries.size()) != dim * dim)
    throw ParseError("matrix entry count does not match its dimension");
  Matrix m(dim, dim);
  std::int64_t k = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index jj = 0; jj < dim; ++jj) {
      const auto& e = entries[k++];
      m(i, jj) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

json layout_to_json(const CellLayout& layout) {
  json regs = json::array();
  for (const auto& r : layout.registers())
    regs.push_back(
        {{"name", r.name}, {"dim", r.dim}, {"classical", r.classical}});
  return json{{"registers", regs}};
}

CellLayout layout_from_json(const json& j) {
  std::vector<Register> regs;
  for (const auto& r : j.at("registers"))
    regs.push_back(Register{r.at("name").get<std::string>(),
                            r.at("dim").get<int>(),
                            r.at("classical").get<bool>()});
  return CellLayout(std::move(regs));
}

json operator_to_json(const LocalOperator& op) {
  if (op.is_dense())
    return json{{"type", "dense"}, {"matrix", matrix_to_json(op.matrix())}};
  return json{{"type", "builtin"},
              {"name", op.kernel_name()},
              {"params", op.kernel_params()}};
}

LocalOperator builtin_operator(const std::string& name,
                               const std::string& params) {
  if (name == "universal_read")
    return make_universal_qca().read_op();
  if (name == "universal_update")
    return make_universal_qca().update_op();
  throw ParseError("unknown builtin operator '" + name + "' (params '" +
                   params + "')");
}

LocalOperator operator_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "dense")
    return LocalOperator::dense(matrix_from_json(j.at("matrix")));
  if (type == "builtin")
    return builtin_operator(j.at("name").get<std::string>(),
                            j.value("params", std::string()));
  throw ParseError("unknown operator type '" + type + "'");
}

json wrap_exceptions_parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string qca_to_json(const QcaDefinition& qca) {
  json offsets = json::array();
  for (const auto& o : qca.neighborhood().offsets()) offsets.push_back(o);
  json j{{"format", "luqca-qca-v1"},
         {"layout", layout_to_json(qca.layout())},
         {"neighborhood",
          {{"dimension", qca.neighborhood().dimension()},
           {"offsets", offsets}}},
         {"u0", operator_to_json(qca.read_op())},
         {"v0", operator_to_json(qca.update_op())}};
  if (qca.quiescent())
    j["quiescent"] = *qca.quiescent();
  else
    j["quiescent"] = nullptr;
  return j.dump(2);
}

QcaDefinition qca_from_json(const std::string& text) {
  json j = wrap_exceptions_parse(text);
  try {
    if (j.at("format").get<std::string>() != "luqca-qca-v1")
      throw ParseError("not a luqca-qca-v1 document");
    CellLayout layout = layout_from_json(j.at("layout"));
    const auto& n = j.at("neighborhood");
    std::vector<Coord> offsets;
    for (const auto& o : n.at("offsets"))
      offsets.push_back(o.get<Coord>());
    NeighborhoodScheme nb(n.at("dimension").get<int>(), offsets);
    std::optional<int> quiescent;
    if (j.contains("quiescent") && !j.at("quiescent").is_null())
      quiescent = j.at("quiescent").get<int>();
    return QcaDefinition(layout, nb, operator_from_json(j.at("u0")),
                         operator_from_json(j.at("v0")), quiescent);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed QCA document: ") + e.what());
  }
}

std::string cqca_to_json(const CqcaDefinition& cqca) {
  const Coloring& col = cqca.coloring();
  json phases = json::array();
  for (const auto& ph : cqca.phases())
    phases.push_back(
        {{"color", ph.color}, {"matrix", matrix_to_json(ph.op)}});
  json j{{"format", "luqca-cqca-v1"},
         {"layout", layout_to_json(cqca.layout())},
         {"coloring",
          {{"dimension", col.dimension()},
           {"period", col.period()},
           {"colors", col.table()},
           {"k", col.num_colors()}}},
         {"phases", phases}};
  if (cqca.quiescent())
    j["quiescent"] = *cqca.quiescent();
  else
    j["quiescent"] = nullptr;
  return j.dump(2);
}

CqcaDefinition cqca_from_json(const std::string& text) {
  json j = wrap_exceptions_parse(text);
  try {
    if (j.at("format").get<std::string>() != "luqca-cqca-v1")
      throw ParseError("not a luqca-cqca-v1 document");
    CellLayout layout = layout_from_json(j.at("layout"));
    const auto& c = j.at("coloring");
    Coloring col(c.at("dimension").get<int>(), c.at("period").get<Coord>(),
                 c.at("colors").get<std::vector<int>>(), c.at("k").get<int>());
    std::vector<CqcaPhase> phases;
    for (const auto& p : j.at("phases"))
      phases.push_back(
          CqcaPhase{matrix_from_json(p.at("matrix")), p.at("color").get<int>()});
    std::optional<int> quiescent;
    if (j.contains("quiescent") && !j.at("quiescent").is_null())
      quiescent = j.at("quiescent").get<int>();
    return CqcaDefinition(layout, col, std::move(phases), quiescent);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed CQCA document: ") + e.what());
  }
}

ModelFile model_from_json(const std::string& text) {
  json j = wrap_exceptions_parse(text);
  ModelFile mf;
  std::string format;
  try {
    format = j.at("format").get<std::string>();
  } catch (const json::exception&) {
    throw ParseError("model file lacks a format field");
  }
  if (format == "luqca-qca-v1")
    mf.qca = qca_from_json(text);
  else if (format == "luqca-cqca-v1")
    mf.cqca = cqca_from_json(text);
  else
    throw ParseError("unknown model format '" + format + "'");
  return mf;
}

std::string circuit_to_json(const Circuit& c) {
  json layers = json::array();
  for (const auto& layer : c.layers) {
    json gates = json::array();
    for (const auto& g : layer)
      gates.push_back({{"wires", g.wires}, {"matrix", matrix_to_json(g.u)}});
    layers.push_back(gates);
  }
  json j{{"format", "luqca-circuit-v1"},
         {"wire_dims", c.wire_dims},
         {"layers", layers}};
  return j.dump(2);
}

Circuit circuit_from_json(const std::string& text) {
  json j = wrap_exceptions_parse(text);
  try {
    if (j.at("format").get<std::string>() != "luqca-circuit-v1")
      throw ParseError("not a luqca-circuit-v1 document");
    Circuit c;
    c.wire_dims = j.at("wire_dims").get<std::vector<int>>();
    for (const auto& layer : j.at("layers")) {
      std::vector<Gate> gates;
      for (const auto& g : layer)
        gates.push_back(Gate{matrix_from_json(g.at("matrix")),
                             g.at("wires").get<std::vector<int>>()});
      c.layers.push_back(std::move(gates));
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed circuit document: ") + e.what());
  }
}

std::string state_to_json(const RegionState& state, double threshold) {
  const Region& r = state.region();
  json j{{"format", "luqca-state-v1"},
         {"layout", layout_to_json(state.layout())},
         {"region",
          {{"lower", r.lower()},
           {"upper", r.upper()},
           {"boundary",
            r.boundary() == BoundaryMode::Torus ? "torus" : "quiescent"}}},
         {"t", state.step_count()}};
  if (state.has_classical()) {
    json cls = json::array();
    for (std::int64_t i = 0; i < state.cell_count(); ++i)
      cls.push_back(state.classical_of(i));
    j["classical"] = cls;
  }
  json amps = json::array();
  auto emit = [&](const BasisKey& key, Complex v) {
    if (std::abs(v) <= threshold) return;
    amps.push_back(
        {{"cells", key}, {"re", v.real()}, {"im", v.imag()}});
  };
  if (state.is_sparse()) {
    for (const auto& [key, v] : state.sparse_amplitudes()) emit(key, v);
  } else {
    const int qdim = state.layout().quantum_dim();
    const auto& vec = state.dense_amplitudes();
    for (std::int64_t idx = 0; idx < vec.size(); ++idx) {
      if (vec(idx) == Complex(0, 0)) continue;
      BasisKey key(state.cell_count());
      std::int64_t rem = idx;
      for (std::int64_t i = state.cell_count() - 1; i >= 0; --i) {
        key[i] = static_cast<int>(rem % qdim);
        rem /= qdim;
      }
      emit(key, vec(idx));
    }
  }
  j["amplitudes"] = amps;
  return j.dump(2);
}

RegionState state_from_json(const std::string& text) {
  json j = wrap_exceptions_parse(text);
  try {
    if (j.at("format").get<std::string>() != "luqca-state-v1")
      throw ParseError("not a luqca-state-v1 document");
    CellLayout layout = layout_from_json(j.at("layout"));
    const auto& rj = j.at("region");
    Region region(rj.at("lower").get<Coord>(), rj.at("upper").get<Coord>(),
                  rj.at("boundary").get<std::string>() == "torus"
                      ? BoundaryMode::Torus
                      : BoundaryMode::Quiescent);
    RegionState s(region, layout, 0, /*sparse=*/true);
    s.clear_amplitudes();
    if (j.contains("classical"))
      for (std::int64_t i = 0; i < s.cell_count(); ++i)
        s.set_classical(i, j.at("classical")[i].get<std::vector<int>>());
    for (const auto& a : j.at("amplitudes"))
      s.set_amplitude(a.at("cells").get<BasisKey>(),
                      Complex(a.at("re").get<double>(),
                              a.at("im").get<double>()));
    s.set_step_count(j.at("t").get<std::int64_t>());
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed state document: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParseError("cannot open '" + path + "' for writing");
  os << text;
  if (!os.flush()) throw ParseError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

CsvWriter::CsvWriter(std::ostream& os, const std::string& name,
                     const std::vector<std::string>& columns)
    : os_(os), columns_(columns.size()) {
  os_ << "# luqca-csv-v1 " << name << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i)
    os_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw StructuralError("CSV row arity mismatch");
  std::ostringstream line;
  line.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i)
    line << values[i] << (i + 1 < values.size() ? "," : "\n");
  os_ << line.str();
}

}  // namespace luqca
