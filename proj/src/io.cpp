#include "nchardy/io.hpp"

#include <fstream>
#include <sstream>

namespace nchardy::io {

namespace {

ParseError field_error(const std::string& context, const std::string& what) {
  return ParseError(context + ": " + what);
}

const json& expect(const json& j, const std::string& field,
                   const std::string& context) {
  if (!j.is_object() || !j.contains(field))
    throw field_error(context, "missing field \"" + field + "\"");
  return j.at(field);
}

cx complex_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw field_error(context, "complex values are [re, im] pairs");
  return cx(j[0].get<double>(), j[1].get<double>());
}

json complex_to_json(cx v) { return json::array({v.real(), v.imag()}); }

int vertex_of(const DirectedGraph& g, const json& j, const std::string& context) {
  if (!j.is_string()) throw field_error(context, "vertex names are strings");
  int v = g.find_vertex(j.get<std::string>());
  if (v < 0)
    throw field_error(context, "unknown vertex \"" + j.get<std::string>() + "\"");
  return v;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& context) {
  if (!j.is_array() || j.empty())
    throw field_error(context, "matrices are nonempty arrays of rows");
  Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array())
    throw field_error(context, "matrix rows are arrays of [re, im] pairs");
  Eigen::Index cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols)
      throw field_error(context, "ragged matrix at row " + std::to_string(r));
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = complex_from_json(j[r][c], context + " row " + std::to_string(r));
  }
  return m;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

GraphPtr graph_from_json(const json& j, const std::string& context) {
  const json& jv = expect(j, "vertices", context);
  if (!jv.is_array()) throw field_error(context, "\"vertices\" must be an array");
  std::vector<std::string> vertices;
  for (const json& v : jv) {
    if (!v.is_string()) throw field_error(context, "vertex names are strings");
    vertices.push_back(v.get<std::string>());
  }
  std::vector<DirectedGraph::Edge> edges;
  const json& je = expect(j, "edges", context);
  if (!je.is_array()) throw field_error(context, "\"edges\" must be an array");
  for (std::size_t i = 0; i < je.size(); ++i) {
    const std::string ctx = context + " edge #" + std::to_string(i);
    const json& e = je[i];
    DirectedGraph::Edge edge;
    const json& name = expect(e, "name", ctx);
    if (!name.is_string()) throw field_error(ctx, "\"name\" must be a string");
    edge.name = name.get<std::string>();
    auto find = [&](const std::string& field) {
      const json& jf = expect(e, field, ctx);
      if (!jf.is_string()) throw field_error(ctx, "\"" + field + "\" must be a string");
      std::string v = jf.get<std::string>();
      for (std::size_t k = 0; k < vertices.size(); ++k)
        if (vertices[k] == v) return static_cast<int>(k);
      throw field_error(ctx, "unknown vertex \"" + v + "\"");
    };
    edge.src = find("src");
    edge.rng = find("rng");
    edges.push_back(std::move(edge));
  }
  try {
    return std::make_shared<DirectedGraph>(std::move(vertices), std::move(edges));
  } catch (const ContractViolation& e) {
    throw field_error(context, e.what());
  }
}

GraphPtr load_graph(const std::string& path) {
  return graph_from_json(load_file(path), path);
}

json graph_to_json(const DirectedGraph& g) {
  json j;
  j["vertices"] = json::array();
  for (int v = 0; v < g.n_vertices(); ++v) j["vertices"].push_back(g.vertex_name(v));
  j["edges"] = json::array();
  for (int e = 0; e < g.n_edges(); ++e)
    j["edges"].push_back({{"name", g.edge(e).name},
                          {"src", g.vertex_name(g.src(e))},
                          {"rng", g.vertex_name(g.rng(e))}});
  return j;
}

RepPtr representation_from_json(const json& j, GraphPtr g,
                                const std::string& context) {
  const json& jm = expect(j, "multiplicity", context);
  if (!jm.is_object())
    throw field_error(context, "\"multiplicity\" must map vertices to integers");
  std::vector<int> mult(g->n_vertices(), 0);
  for (const auto& [key, value] : jm.items()) {
    int v = g->find_vertex(key);
    if (v < 0) throw field_error(context, "unknown vertex \"" + key + "\"");
    if (!value.is_number_integer() || value.get<int>() < 0)
      throw field_error(context, "multiplicity of \"" + key +
                                     "\" must be a nonnegative integer");
    mult[v] = value.get<int>();
  }
  return std::make_shared<Representation>(std::move(g), std::move(mult));
}

RepPtr load_representation(const std::string& path, GraphPtr g) {
  return representation_from_json(load_file(path), std::move(g), path);
}

json representation_to_json(const Representation& rep) {
  json jm = json::object();
  for (int v = 0; v < rep.graph()->n_vertices(); ++v)
    jm[rep.graph()->vertex_name(v)] = rep.mult(v);
  return json{{"multiplicity", std::move(jm)}};
}

namespace {

std::vector<Matrix> edge_blocks_from_json(const json& j, const DirectedGraph& g,
                                          const std::string& context,
                                          bool dual_shape, const Representation& rep) {
  const json& jb = expect(j, "blocks", context);
  if (!jb.is_object())
    throw field_error(context, "\"blocks\" must map edge names to matrices");
  std::vector<Matrix> blocks;
  for (int e = 0; e < g.n_edges(); ++e) {
    int rows = dual_shape ? rep.mult(g.src(e)) : rep.mult(g.rng(e));
    int cols = dual_shape ? rep.mult(g.rng(e)) : rep.mult(g.src(e));
    const std::string& name = g.edge(e).name;
    if (!jb.contains(name)) {
      blocks.push_back(Matrix::Zero(rows, cols));
      continue;
    }
    Matrix m = matrix_from_json(jb.at(name), context + " block \"" + name + "\"");
    if (m.rows() != rows || m.cols() != cols)
      throw field_error(context, "block \"" + name + "\" must be " +
                                     std::to_string(rows) + "x" +
                                     std::to_string(cols));
    blocks.push_back(std::move(m));
  }
  return blocks;
}

}  // namespace

CovariantRep covariant_from_json(const json& j, GraphPtr g,
                                 const std::string& context) {
  RepPtr rep = representation_from_json(j, g, context);
  std::vector<Matrix> blocks =
      edge_blocks_from_json(j, *g, context, /*dual_shape=*/false, *rep);
  return CovariantRep(std::move(rep), std::move(blocks));
}

CovariantRep load_covariant(const std::string& path, GraphPtr g) {
  return covariant_from_json(load_file(path), std::move(g), path);
}

json covariant_to_json(const CovariantRep& t) {
  json j = representation_to_json(*t.rep());
  json jb = json::object();
  const DirectedGraph& g = *t.rep()->graph();
  for (int e = 0; e < g.n_edges(); ++e)
    jb[g.edge(e).name] = matrix_to_json(t.block(e));
  j["blocks"] = std::move(jb);
  return j;
}

DualPoint point_from_json(const json& j, GraphPtr g, const std::string& context) {
  RepPtr rep =
      representation_from_json(expect(j, "representation", context), g, context);
  std::vector<Matrix> blocks =
      edge_blocks_from_json(j, *g, context, /*dual_shape=*/true, *rep);
  return DualPoint(std::move(rep), std::move(blocks));
}

DualPoint load_point(const std::string& path, GraphPtr g) {
  return point_from_json(load_file(path), std::move(g), path);
}

json point_to_json(const DualPoint& p) {
  json j;
  j["representation"] = representation_to_json(*p.rep());
  json jb = json::object();
  const DirectedGraph& g = *p.rep()->graph();
  for (int e = 0; e < g.n_edges(); ++e)
    jb[g.edge(e).name] = matrix_to_json(p.block(e));
  j["blocks"] = std::move(jb);
  return j;
}

HardyElement hardy_from_json(const json& j, GraphPtr g, const std::string& context) {
  AlgebraElement a0(g);
  if (j.contains("a0")) {
    const json& ja = j.at("a0");
    if (!ja.is_object())
      throw field_error(context, "\"a0\" must map vertices to [re, im] pairs");
    for (const auto& [key, value] : ja.items()) {
      int v = g->find_vertex(key);
      if (v < 0) throw field_error(context, "unknown vertex \"" + key + "\"");
      a0.set(v, complex_from_json(value, context + " a0[" + key + "]"));
    }
  }
  std::vector<CorrTensor> tensors;
  if (j.contains("tensors")) {
    const json& jt = j.at("tensors");
    if (!jt.is_array()) throw field_error(context, "\"tensors\" must be an array");
    for (const json& item : jt) {
      const json& jd = expect(item, "degree", context);
      if (!jd.is_number_integer() || jd.get<int>() < 1)
        throw field_error(context, "tensor degrees are positive integers");
      int degree = jd.get<int>();
      while (static_cast<int>(tensors.size()) < degree)
        tensors.emplace_back(g, static_cast<int>(tensors.size()) + 1);
      CorrTensor& t = tensors[degree - 1];
      const json& je = expect(item, "entries", context);
      if (!je.is_array()) throw field_error(context, "\"entries\" must be an array");
      for (const json& entry : je) {
        const std::string ctx = context + " degree-" + std::to_string(degree) +
                                " entry";
        if (!entry.is_array() || entry.size() != 3 || !entry[0].is_array() ||
            !entry[1].is_number() || !entry[2].is_number())
          throw field_error(ctx, "entries are [edge-list, re, im]");
        std::vector<int> edges;
        for (const json& name : entry[0]) {
          if (!name.is_string()) throw field_error(ctx, "edge names are strings");
          int e = g->find_edge(name.get<std::string>());
          if (e < 0)
            throw field_error(ctx, "unknown edge \"" + name.get<std::string>() + "\"");
          edges.push_back(e);
        }
        if (static_cast<int>(edges.size()) != degree)
          throw field_error(ctx, "edge list length must equal the degree");
        Path p = [&]() {
          try {
            return Path(*g, edges);
          } catch (const ContractViolation& e) {
            throw field_error(ctx, e.what());
          }
        }();
        t.set_coeff(p, t.coeff(p) + cx(entry[1].get<double>(), entry[2].get<double>()));
      }
    }
  }
  if (j.contains("rule")) {
    // Geometric continuation: theta_k = theta_{k-1} (x) factor beyond the
    // listed tensors, with a degree-1 factor. Lets bundles carry genuine
    // series (geometric decay, or divergence demos past the radius).
    const json& jr = j.at("rule");
    const json& kind = expect(jr, "kind", context);
    if (!kind.is_string() || kind.get<std::string>() != "geometric")
      throw field_error(context, "only the \"geometric\" rule kind is supported");
    if (tensors.empty())
      throw field_error(context, "a rule needs at least one listed tensor");
    CorrTensor factor(g, 1);
    const json& jf = expect(jr, "factor", context);
    if (!jf.is_array()) throw field_error(context, "\"factor\" must be an entry list");
    for (const json& entry : jf) {
      if (!entry.is_array() || entry.size() != 3 || !entry[0].is_array() ||
          entry[0].size() != 1 || !entry[0][0].is_string())
        throw field_error(context, "factor entries are [[edge], re, im]");
      int e = g->find_edge(entry[0][0].get<std::string>());
      if (e < 0)
        throw field_error(context,
                          "unknown edge \"" + entry[0][0].get<std::string>() + "\"");
      Path p(*g, {e});
      factor.set_coeff(p, factor.coeff(p) +
                              cx(entry[1].get<double>(), entry[2].get<double>()));
    }
    std::vector<CorrTensor> stored = tensors;
    int top = static_cast<int>(stored.size());
    auto rule = [stored, top, factor, g](int k) -> CorrTensor {
      if (k <= top) return stored[k - 1];
      CorrTensor t = stored.back();
      for (int i = top; i < k; ++i) t = tensor(t, factor);
      return t;
    };
    return HardyElement(std::move(a0), std::move(rule));
  }
  return HardyElement(std::move(a0), std::move(tensors));
}

HardyElement load_hardy(const std::string& path, GraphPtr g) {
  return hardy_from_json(load_file(path), std::move(g), path);
}

json hardy_to_json(const HardyElement& h, int max_degree) {
  json j;
  json ja = json::object();
  const GraphPtr& g = h.graph();
  for (int v = 0; v < g->n_vertices(); ++v)
    ja[g->vertex_name(v)] = complex_to_json(h.a0().value(v));
  j["a0"] = std::move(ja);
  j["tensors"] = json::array();
  int top = h.is_polynomial() ? std::min(max_degree, h.poly_degree()) : max_degree;
  for (int k = 1; k <= top; ++k) {
    CorrTensor t = h.tensor(k);
    if (t.is_zero()) continue;
    json entries = json::array();
    for (const auto& [p, c] : t.coeffs()) {
      json names = json::array();
      for (int e : p.edges()) names.push_back(g->edge(e).name);
      entries.push_back(json::array({names, c.real(), c.imag()}));
    }
    j["tensors"].push_back({{"degree", k}, {"entries", std::move(entries)}});
  }
  return j;
}

InterpolationProblem problem_from_json(const json& j, GraphPtr g,
                                       const std::string& context) {
  RepPtr rep =
      representation_from_json(expect(j, "representation", context), g, context);
  InterpolationProblem prob;
  const json& jp = expect(j, "points", context);
  if (!jp.is_array() || jp.empty())
    throw field_error(context, "\"points\" must be a nonempty array");
  for (std::size_t i = 0; i < jp.size(); ++i) {
    std::vector<Matrix> blocks = edge_blocks_from_json(
        jp[i], *g, context + " point #" + std::to_string(i), /*dual_shape=*/true,
        *rep);
    prob.points.emplace_back(rep, std::move(blocks));
  }
  auto load_list = [&](const char* field, std::vector<Matrix>& out) {
    const json& jl = expect(j, field, context);
    if (!jl.is_array() || jl.size() != jp.size())
      throw field_error(context, std::string("\"") + field +
                                     "\" must list one matrix per point");
    for (std::size_t i = 0; i < jl.size(); ++i) {
      Matrix m = matrix_from_json(jl[i], context + " " + field + "[" +
                                             std::to_string(i) + "]");
      if (m.rows() != rep->dim() || m.cols() != rep->dim())
        throw field_error(context, std::string(field) + "[" + std::to_string(i) +
                                       "] must act on H (dim " +
                                       std::to_string(rep->dim()) + ")");
      out.push_back(std::move(m));
    }
  };
  load_list("B", prob.left);
  load_list("C", prob.right);
  return prob;
}

InterpolationProblem load_problem(const std::string& path, GraphPtr g) {
  return problem_from_json(load_file(path), std::move(g), path);
}

}  // namespace nchardy::io
