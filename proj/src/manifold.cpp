#include "msflow/manifold.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace msflow {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Coeff parse_int(std::string_view s, std::string_view what) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Coeff value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw Error(ErrorKind::MalformedSpec, "expected integer for " + std::string(what) + ", got '" + std::string(s) + "'");
  return value;
}

std::pair<std::string_view, std::string_view> key_value(std::string_view token) {
  const auto eq = token.find('=');
  if (eq == std::string_view::npos)
    throw Error(ErrorKind::MalformedSpec, "expected key=value, got '" + std::string(token) + "'");
  return {trim(token.substr(0, eq)), trim(token.substr(eq + 1))};
}

CoeffVector parse_int_list(std::string_view s, std::string_view what) {
  s = trim(s);
  if (s.empty()) return CoeffVector(0);
  const auto parts = split(s, ',');
  CoeffVector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_int(parts[i], what);
  return v;
}

Coeff abs_gcd(Coeff a, Coeff b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

std::vector<SurgeryCoefficient> fibers_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::MalformedSpec, "fibers must be an array");
  std::vector<SurgeryCoefficient> out;
  for (const auto& f : j) {
    if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() || !f[1].is_number_integer())
      throw Error(ErrorKind::MalformedSpec, "fiber must be [p, q]");
    out.emplace_back(f[0].get<Coeff>(), f[1].get<Coeff>());
  }
  return out;
}

std::size_t get_index(const nlohmann::json& j, std::string_view what) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    throw Error(ErrorKind::MalformedSpec, std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

void check_dims(const HomologyClassExpr& c, const ClassDims& expected, std::string_view where) {
  if (c.dims() == expected) return;
  std::ostringstream os;
  os << where << ": expected (lambda, alpha, tau) lengths (" << expected.lambda << ", " << expected.alpha << ", "
     << expected.tau << "), got (" << c.lambda.size() << ", " << c.alpha.size() << ", " << c.tau.size() << ")";
  throw Error(ErrorKind::DimensionMismatch, os.str());
}

}  // namespace

SurgeryCoefficient::SurgeryCoefficient(Coeff p, Coeff q) : p_(p), q_(q) {
  if (q == 0) throw Error(ErrorKind::InvalidCoefficient, "surgery denominator is zero");
  if (p == -1 || p == 0 || p == 1)
    throw Error(ErrorKind::InvalidCoefficient,
                "exceptional coefficient " + std::to_string(p) + "/" + std::to_string(q) + " has p in {-1,0,1}");
  if (abs_gcd(p, q) != 1)
    throw Error(ErrorKind::InvalidCoefficient,
                "coefficient " + std::to_string(p) + "/" + std::to_string(q) + " is not in lowest terms");
}

SeifertClosed::SeifertClosed(int genus, Coeff euler, std::vector<SurgeryCoefficient> exceptional)
    : genus_(genus), euler_(euler), exceptional_(std::move(exceptional)) {
  if (genus < 0) throw Error(ErrorKind::MalformedSpec, "genus must be non-negative");
}

SeifertPiece::SeifertPiece(int genus, int boundary_count, std::vector<SurgeryCoefficient> exceptional)
    : genus_(genus), boundary_count_(boundary_count), exceptional_(std::move(exceptional)) {
  if (genus < 0) throw Error(ErrorKind::MalformedSpec, "genus must be non-negative");
  if (boundary_count < 1)
    throw Error(ErrorKind::MalformedSpec, "a Seifert piece needs at least one boundary torus");
}

GraphManifold::GraphManifold(std::vector<SeifertPiece> pieces, std::vector<GraphEdge> edges)
    : pieces_(std::move(pieces)), edges_(std::move(edges)) {
  if (pieces_.empty()) throw Error(ErrorKind::MalformedSpec, "graph manifold needs at least one piece");

  std::vector<std::vector<int>> used(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) used[i].assign(static_cast<std::size_t>(pieces_[i].boundary_count()), 0);

  auto mark = [&](std::size_t piece, std::size_t slot, std::size_t edge) {
    if (piece >= pieces_.size())
      throw Error(ErrorKind::UnmatchedBoundary, "edge " + std::to_string(edge) + " names missing piece " + std::to_string(piece));
    if (slot >= used[piece].size())
      throw Error(ErrorKind::UnmatchedBoundary, "edge " + std::to_string(edge) + " names slot " + std::to_string(slot) +
                                                    " but piece " + std::to_string(piece) + " has " +
                                                    std::to_string(used[piece].size()) + " boundary tori");
    if (++used[piece][slot] > 1)
      throw Error(ErrorKind::UnmatchedBoundary,
                  "slot " + std::to_string(slot) + " of piece " + std::to_string(piece) + " is glued twice");
  };

  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& edge = edges_[e];
    mark(edge.piece_a, edge.slot_a, e);
    mark(edge.piece_b, edge.slot_b, e);
    const Coeff det = edge.gluing(0, 0) * edge.gluing(1, 1) - edge.gluing(0, 1) * edge.gluing(1, 0);
    if (det != 1 && det != -1)
      throw Error(ErrorKind::BadGluingMatrix, "edge " + std::to_string(e) + " has gluing determinant " + std::to_string(det));
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    for (std::size_t s = 0; s < used[i].size(); ++s)
      if (used[i][s] == 0)
        throw Error(ErrorKind::UnmatchedBoundary, "slot " + std::to_string(s) + " of piece " + std::to_string(i) + " is not glued");

  // union-find over pieces
  std::vector<std::size_t> parent(pieces_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& edge : edges_) parent[find(edge.piece_a)] = find(edge.piece_b);
  for (std::size_t i = 1; i < pieces_.size(); ++i)
    if (find(i) != find(0))
      throw Error(ErrorKind::DisconnectedGraph, "piece " + std::to_string(i) + " is not connected to piece 0");
}

ClassDims class_dims(const SeifertClosed& m) { return {m.genus(), m.exceptional_count() + 1, 0}; }

ClassDims class_dims(const SeifertPiece& m) {
  return {m.genus(), m.exceptional_count() + 1, m.boundary_count() - 1};
}

HomologyClassExpr HomologyClassExpr::zero(const ClassDims& dims) {
  return {CoeffVector::Zero(dims.lambda), CoeffVector::Zero(dims.alpha), CoeffVector::Zero(dims.tau)};
}

bool HomologyClassExpr::is_zero() const {
  return (lambda.array() == 0).all() && (alpha.array() == 0).all() && (tau.array() == 0).all();
}

HomologyClassExpr& HomologyClassExpr::operator+=(const HomologyClassExpr& other) {
  if (dims() != other.dims()) throw Error(ErrorKind::DimensionMismatch, "adding classes of different shapes");
  lambda += other.lambda;
  alpha += other.alpha;
  tau += other.tau;
  return *this;
}

HomologyClassExpr operator*(Coeff s, HomologyClassExpr a) {
  a.lambda *= s;
  a.alpha *= s;
  a.tau *= s;
  return a;
}

bool operator==(const HomologyClassExpr& a, const HomologyClassExpr& b) {
  return a.dims() == b.dims() && a.lambda == b.lambda && a.alpha == b.alpha && a.tau == b.tau;
}

SeifertClosed parse_seifert(std::string_view text) {
  const auto tokens = split(trim(text), ',');
  if (tokens.size() < 2 || tokens.size() > 3)
    throw Error(ErrorKind::MalformedSpec, "expected g=<int>,e=<int>[,fibers=<p/q>;...]");
  const auto [gk, gv] = key_value(tokens[0]);
  const auto [ek, ev] = key_value(tokens[1]);
  if (gk != "g" || ek != "e") throw Error(ErrorKind::MalformedSpec, "expected keys g and e in that order");
  const Coeff genus = parse_int(gv, "g");
  const Coeff euler = parse_int(ev, "e");
  if (genus < 0) throw Error(ErrorKind::MalformedSpec, "genus must be non-negative");

  std::vector<SurgeryCoefficient> fibers;
  if (tokens.size() == 3) {
    const auto [fk, fv] = key_value(tokens[2]);
    if (fk != "fibers") throw Error(ErrorKind::MalformedSpec, "third key must be fibers");
    for (auto f : split(fv, ';')) {
      const auto slash = f.find('/');
      if (slash == std::string_view::npos) throw Error(ErrorKind::MalformedSpec, "fiber must be p/q");
      fibers.emplace_back(parse_int(f.substr(0, slash), "p"), parse_int(f.substr(slash + 1), "q"));
    }
  }
  return SeifertClosed(static_cast<int>(genus), euler, std::move(fibers));
}

std::string print_seifert(const SeifertClosed& m) {
  std::string out = "g=" + std::to_string(m.genus()) + ",e=" + std::to_string(m.euler());
  for (std::size_t i = 0; i < m.exceptional().size(); ++i) {
    out += i == 0 ? ",fibers=" : ";";
    out += std::to_string(m.exceptional()[i].p()) + "/" + std::to_string(m.exceptional()[i].q());
  }
  return out;
}

GraphManifold graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("pieces") || !doc.contains("edges") || !doc["pieces"].is_array() ||
      !doc["edges"].is_array())
    throw Error(ErrorKind::MalformedSpec, "graph document needs arrays 'pieces' and 'edges'");

  std::vector<SeifertPiece> pieces;
  for (const auto& p : doc["pieces"]) {
    if (!p.is_object() || !p.contains("genus") || !p.contains("boundary"))
      throw Error(ErrorKind::MalformedSpec, "piece needs 'genus' and 'boundary'");
    const auto genus = get_index(p["genus"], "genus");
    const auto boundary = get_index(p["boundary"], "boundary");
    auto fibers = p.contains("fibers") ? fibers_from_json(p["fibers"]) : std::vector<SurgeryCoefficient>{};
    pieces.emplace_back(static_cast<int>(genus), static_cast<int>(boundary), std::move(fibers));
  }

  std::vector<GraphEdge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 5) throw Error(ErrorKind::MalformedSpec, "edge must be [pi, bi, pj, bj, [[a,b],[c,d]]]");
    GraphEdge edge;
    edge.piece_a = get_index(e[0], "piece index");
    edge.slot_a = get_index(e[1], "boundary index");
    edge.piece_b = get_index(e[2], "piece index");
    edge.slot_b = get_index(e[3], "boundary index");
    const auto& m = e[4];
    if (!m.is_array() || m.size() != 2 || !m[0].is_array() || !m[1].is_array() || m[0].size() != 2 || m[1].size() != 2)
      throw Error(ErrorKind::MalformedSpec, "gluing must be a 2x2 integer matrix");
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        if (!m[r][c].is_number_integer()) throw Error(ErrorKind::MalformedSpec, "gluing entries must be integers");
        edge.gluing(r, c) = m[r][c].get<Coeff>();
      }
    edges.push_back(edge);
  }
  return GraphManifold(std::move(pieces), std::move(edges));
}

GraphManifold parse_graph(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::MalformedSpec, e.what());
  }
  return graph_from_json(doc);
}

nlohmann::json graph_to_json(const GraphManifold& g) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : g.pieces()) {
    nlohmann::json fibers = nlohmann::json::array();
    for (const auto& f : p.exceptional()) fibers.push_back({f.p(), f.q()});
    pieces.push_back({{"genus", p.genus()}, {"boundary", p.boundary_count()}, {"fibers", fibers}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) {
    const auto& m = e.gluing;
    edges.push_back({e.piece_a, e.slot_a, e.piece_b, e.slot_b,
                     nlohmann::json{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}});
  }
  return {{"pieces", pieces}, {"edges", edges}};
}

std::string print_graph(const GraphManifold& g) { return graph_to_json(g).dump(); }

HomologyClassExpr parse_class(std::string_view text) {
  HomologyClassExpr c{CoeffVector(0), CoeffVector(0), CoeffVector(0)};
  text = trim(text);
  if (text.empty()) return c;
  bool seen[3] = {false, false, false};
  for (auto token : split(text, ';')) {
    const auto [key, value] = key_value(token);
    int slot = -1;
    if (key == "lambda") slot = 0;
    if (key == "alpha") slot = 1;
    if (key == "tau") slot = 2;
    if (slot < 0) throw Error(ErrorKind::MalformedSpec, "unknown class key '" + std::string(key) + "'");
    if (seen[slot]) throw Error(ErrorKind::MalformedSpec, "duplicate class key '" + std::string(key) + "'");
    seen[slot] = true;
    (slot == 0 ? c.lambda : slot == 1 ? c.alpha : c.tau) = parse_int_list(value, key);
  }
  return c;
}

std::string print_class(const HomologyClassExpr& c) {
  auto list = [](const CoeffVector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v(i));
    return s;
  };
  std::string out = "lambda=" + list(c.lambda) + ";alpha=" + list(c.alpha);
  if (c.tau.size() > 0) out += ";tau=" + list(c.tau);
  return out;
}

GraphClass parse_graph_class(std::string_view text) {
  GraphClass out;
  out.cycle = CoeffVector(0);
  for (auto segment : split(trim(text), '|')) {
    segment = trim(segment);
    if (segment.rfind("cycle=", 0) == 0) {
      out.cycle = parse_int_list(segment.substr(6), "cycle");
      continue;
    }
    if (out.cycle.size() > 0) throw Error(ErrorKind::MalformedSpec, "cycle segment must come last");
    out.pieces.push_back(parse_class(segment));
  }
  return out;
}

nlohmann::json class_to_json(const HomologyClassExpr& c) {
  auto arr = [](const CoeffVector& v) { return std::vector<Coeff>(v.data(), v.data() + v.size()); };
  return {{"lambda", arr(c.lambda)}, {"alpha", arr(c.alpha)}, {"tau", arr(c.tau)}};
}

HomologyClassExpr class_from_json(const nlohmann::json& j) {
  auto vec = [&](const char* key) {
    if (!j.contains(key)) return CoeffVector(0);
    const auto v = j.at(key).get<std::vector<Coeff>>();
    return CoeffVector(Eigen::Map<const CoeffVector>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  if (!j.is_object()) throw Error(ErrorKind::MalformedSpec, "class must be a JSON object");
  return {vec("lambda"), vec("alpha"), vec("tau")};
}

const HomologyClassExpr& validate_class(const SeifertClosed& m, const HomologyClassExpr& c) {
  check_dims(c, class_dims(m), "closed Seifert class");
  if (m.unit_euler() && c.alpha(0) != 0)
    throw Error(ErrorKind::Alpha0NotAllowed,
                "gamma_0 coefficient must vanish when |e| = 1 (got " + std::to_string(c.alpha(0)) + ")");
  return c;
}

const HomologyClassExpr& validate_class(const SeifertPiece& m, const HomologyClassExpr& c) {
  check_dims(c, class_dims(m), "Seifert piece class");
  return c;
}

const GraphClass& validate_class(const GraphManifold& m, const GraphClass& c) {
  if (c.pieces.size() != m.piece_count())
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(m.piece_count()) + " per-piece classes, got " +
                                                  std::to_string(c.pieces.size()));
  for (std::size_t i = 0; i < c.pieces.size(); ++i) validate_class(m.pieces()[i], c.pieces[i]);
  if (c.cycle.size() != 0 && static_cast<std::size_t>(c.cycle.size()) != m.cycle_rank())
    throw Error(ErrorKind::DimensionMismatch, "cycle coordinates must have length " + std::to_string(m.cycle_rank()));
  return c;
}

}  // namespace msflow
