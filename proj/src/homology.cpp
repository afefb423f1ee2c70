#include "msflow/homology.hpp"

#include <numeric>
#include <queue>
#include <sstream>

namespace msflow {

namespace {

bool outside_unit_range(Coeff x) { return x < -1 || x > 1; }

std::string coeff_name(const char* stem, Eigen::Index i) { return stem + std::to_string(i); }

// Generator layout shared by closed manifolds and pieces.
struct Layout {
  Eigen::Index genus = 0;
  Eigen::Index fibers = 0;
  Eigen::Index deltas = 0;

  Eigen::Index a(Eigen::Index i) const { return 2 * i; }
  Eigen::Index b(Eigen::Index i) const { return 2 * i + 1; }
  Eigen::Index h() const { return 2 * genus; }
  Eigen::Index mu(Eigen::Index j) const { return 2 * genus + 1 + j; }
  Eigen::Index delta(Eigen::Index c) const { return 2 * genus + 1 + fibers + c; }
  Eigen::Index count() const { return 2 * genus + 1 + fibers + deltas; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (Eigen::Index i = 1; i <= genus; ++i) {
      out.push_back(coeff_name("a", i));
      out.push_back(coeff_name("b", i));
    }
    out.emplace_back("h");
    for (Eigen::Index j = 1; j <= fibers; ++j) out.push_back(coeff_name("mu", j));
    for (Eigen::Index c = 1; c <= deltas; ++c) out.push_back(coeff_name("d", c));
    return out;
  }
};

IntMatrix fiber_relations(const Layout& L, const std::vector<SurgeryCoefficient>& fibers) {
  IntMatrix R = IntMatrix::Zero(L.fibers, L.count());
  for (Eigen::Index j = 0; j < L.fibers; ++j) {
    const auto& f = fibers[static_cast<std::size_t>(j)];
    R(j, L.h()) = f.q();
    R(j, L.mu(j)) = f.p();
  }
  return R;
}

IntMatrix distinguished_columns(const Layout& L, const std::vector<SurgeryCoefficient>& fibers,
                                std::vector<std::string>& names) {
  const Eigen::Index cols = L.genus + 1 + L.fibers + L.deltas;
  IntMatrix D = IntMatrix::Zero(L.count(), cols);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < L.genus; ++i, ++col) {
    D(L.a(i), col) = 1;
    names.push_back(coeff_name("beta", i + 1));
  }
  D(L.h(), col++) = 1;
  names.emplace_back("gamma0");
  for (Eigen::Index j = 0; j < L.fibers; ++j, ++col) {
    const auto [r, s] = core_coefficients(fibers[static_cast<std::size_t>(j)]);
    D(L.mu(j), col) = r;
    D(L.h(), col) = s;
    names.push_back(coeff_name("gamma", j + 1));
  }
  for (Eigen::Index c = 0; c < L.deltas; ++c, ++col) {
    D(L.delta(c), col) = 1;
    names.push_back(coeff_name("delta", c + 1));
  }
  return D;
}

IntVector coeffs_of(const HomologyClassExpr& c) {
  IntVector v(c.lambda.size() + c.alpha.size() + c.tau.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < c.lambda.size(); ++i) v(k++) = c.lambda(i);
  for (Eigen::Index i = 0; i < c.alpha.size(); ++i) v(k++) = c.alpha(i);
  for (Eigen::Index i = 0; i < c.tau.size(); ++i) v(k++) = c.tau(i);
  return v;
}

// Section curve of boundary slot `slot` on a piece, in piece generator coordinates.
IntVector section_class(const Layout& L, Eigen::Index slot) {
  IntVector v = IntVector::Zero(L.count());
  if (slot < L.deltas) {
    v(L.delta(slot)) = 1;
    return v;
  }
  for (Eigen::Index j = 0; j < L.fibers; ++j) v(L.mu(j)) = -1;
  for (Eigen::Index c = 0; c < L.deltas; ++c) v(L.delta(c)) = -1;
  return v;
}

bool all_outside(const CoeffVector& v, Eigen::Index from = 0) {
  for (Eigen::Index i = from; i < v.size(); ++i)
    if (!outside_unit_range(v(i))) return false;
  return true;
}

Layout piece_layout(const SeifertPiece& p) { return {p.genus(), p.exceptional_count(), p.boundary_count() - 1}; }

}  // namespace

BigInt H1Group::torsion_order() const {
  BigInt order = 1;
  for (const auto& d : invariant_factors) order *= d;
  return order;
}

std::string H1Group::to_string() const {
  if (is_trivial()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank > 0) {
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  for (const auto& d : invariant_factors) {
    if (!first) os << " ⊕ ";
    os << "Z/" << d;
    first = false;
  }
  return os.str();
}

bool H1Group::is_zero(const IntVector& element) const {
  if (element.size() != generator_count())
    throw Error(ErrorKind::DimensionMismatch, "element has " + std::to_string(element.size()) + " coordinates, group has " +
                                                  std::to_string(generator_count()) + " generators");
  const IntMatrix relations_by_column = presentation.transpose();
  return solve_in_image<BigInt>(relations_by_column, element).has_value();
}

IntVector H1Group::embed(const HomologyClassExpr& c) const {
  const IntVector coeffs = coeffs_of(c);
  if (coeffs.size() != distinguished.cols())
    throw Error(ErrorKind::DimensionMismatch, "class has " + std::to_string(coeffs.size()) + " coefficients, basis has " +
                                                  std::to_string(distinguished.cols()));
  return distinguished * coeffs;
}

H1Group h1_from_presentation(IntMatrix presentation, std::vector<std::string> generator_names) {
  H1Group g;
  const auto snf = smith_normal_form<BigInt>(presentation);
  for (Eigen::Index i = 0; i < snf.rank; ++i)
    if (snf.S(i, i) != 1) g.invariant_factors.push_back(snf.S(i, i));
  g.free_rank = presentation.cols() - snf.rank;
  g.presentation = std::move(presentation);
  g.generator_names = std::move(generator_names);
  g.distinguished = IntMatrix(g.presentation.cols(), 0);
  return g;
}

std::pair<Coeff, Coeff> core_coefficients(const SurgeryCoefficient& c) {
  const Coeff p = c.p();
  const Coeff q = c.q();
  const Coeff m = q < 0 ? -q : q;
  if (m == 1) return {-q, 0};  // p*0 - q*r = 1
  // s = p^{-1} mod m via extended Euclid
  Coeff old_r = ((p % m) + m) % m, r = m;
  Coeff old_s = 1, s = 0;
  while (r != 0) {
    const Coeff quotient = old_r / r;
    old_r = std::exchange(r, old_r - quotient * r);
    old_s = std::exchange(s, old_s - quotient * s);
  }
  const Coeff sj = ((old_s % m) + m) % m;
  const Coeff rj = (p * sj - 1) / q;
  return {rj, sj};
}

H1Group seifert_h1(const SeifertClosed& m) {
  const Layout L{m.genus(), m.exceptional_count(), 0};
  IntMatrix P(L.fibers + 1, L.count());
  P.setZero();
  P(0, L.h()) = -m.euler();
  for (Eigen::Index j = 0; j < L.fibers; ++j) P(0, L.mu(j)) = 1;
  P.bottomRows(L.fibers) = fiber_relations(L, m.exceptional());

  H1Group g = h1_from_presentation(std::move(P), L.names());
  g.distinguished = distinguished_columns(L, m.exceptional(), g.distinguished_names);
  return g;
}

H1Group piece_h1(const SeifertPiece& m) {
  const Layout L = piece_layout(m);
  H1Group g = h1_from_presentation(fiber_relations(L, m.exceptional()), L.names());
  g.distinguished = distinguished_columns(L, m.exceptional(), g.distinguished_names);
  return g;
}

IntVector GraphH1::embed(const GraphClass& c) const {
  if (c.pieces.size() != piece_offsets.size())
    throw Error(ErrorKind::DimensionMismatch, "graph class has the wrong number of pieces");
  Eigen::Index width = 0;
  for (const auto& piece : c.pieces) width += piece.lambda.size() + piece.alpha.size() + piece.tau.size();
  if (width != group.distinguished.cols())
    throw Error(ErrorKind::DimensionMismatch, "graph class has " + std::to_string(width) + " coefficients, basis has " +
                                                  std::to_string(group.distinguished.cols()));
  IntVector coeffs(width);
  Eigen::Index k = 0;
  for (const auto& piece : c.pieces) {
    const IntVector local = coeffs_of(piece);
    coeffs.segment(k, local.size()) = local;
    k += local.size();
  }
  IntVector v = group.distinguished * coeffs;
  if (c.cycle.size() != 0) {
    if (c.cycle.size() != cycle_projection.rows())
      throw Error(ErrorKind::DimensionMismatch, "cycle coordinates have the wrong length");
    for (Eigen::Index i = 0; i < c.cycle.size(); ++i) v(cycle_offset + i) = c.cycle(i);
  }
  return v;
}

IntVector GraphH1::project(const IntVector& element) const {
  if (element.size() != group.generator_count())
    throw Error(ErrorKind::DimensionMismatch, "element has " + std::to_string(element.size()) +
                                                  " coordinates, graph homology has " +
                                                  std::to_string(group.generator_count()) + " generators");
  return cycle_projection * element;
}

GraphH1 graph_h1(const GraphManifold& g) {
  const auto& pieces = g.pieces();
  std::vector<Layout> layouts;
  GraphH1 out;
  Eigen::Index offset = 0;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    layouts.push_back(piece_layout(pieces[i]));
    out.piece_offsets.push_back(offset);
    for (const auto& n : layouts.back().names()) names.push_back("Y" + std::to_string(i) + "." + n);
    offset += layouts.back().count();
  }
  out.cycle_offset = offset;

  // spanning tree by BFS from piece 0; remaining edges carry cycle generators
  std::vector<bool> reached(pieces.size(), false);
  std::vector<bool> tree_edge(g.edges().size(), false);
  std::queue<std::size_t> frontier;
  reached[0] = true;
  frontier.push(0);
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop();
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      const auto& edge = g.edges()[e];
      std::size_t w;
      if (edge.piece_a == v) w = edge.piece_b;
      else if (edge.piece_b == v) w = edge.piece_a;
      else continue;
      if (reached[w]) continue;
      reached[w] = true;
      tree_edge[e] = true;
      frontier.push(w);
    }
  }
  for (std::size_t e = 0; e < g.edges().size(); ++e)
    if (!tree_edge[e]) out.cycle_edges.push_back(e);
  for (std::size_t k = 0; k < out.cycle_edges.size(); ++k) names.push_back("z" + std::to_string(k + 1));

  const Eigen::Index generators = offset + static_cast<Eigen::Index>(out.cycle_edges.size());
  Eigen::Index relation_count = 2 * static_cast<Eigen::Index>(g.edges().size());
  for (const auto& L : layouts) relation_count += L.fibers;

  IntMatrix P = IntMatrix::Zero(relation_count, generators);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const IntMatrix R = fiber_relations(layouts[i], pieces[i].exceptional());
    P.block(row, out.piece_offsets[i], R.rows(), R.cols()) = R;
    row += R.rows();
  }
  for (const auto& edge : g.edges()) {
    const auto& La = layouts[edge.piece_a];
    const auto& Lb = layouts[edge.piece_b];
    const Eigen::Index oa = out.piece_offsets[edge.piece_a];
    const Eigen::Index ob = out.piece_offsets[edge.piece_b];
    IntVector fiber_a = IntVector::Zero(generators), section_a = IntVector::Zero(generators);
    IntVector fiber_b = IntVector::Zero(generators), section_b = IntVector::Zero(generators);
    fiber_a(oa + La.h()) = 1;
    fiber_b(ob + Lb.h()) = 1;
    section_a.segment(oa, La.count()) = section_class(La, static_cast<Eigen::Index>(edge.slot_a));
    section_b.segment(ob, Lb.count()) = section_class(Lb, static_cast<Eigen::Index>(edge.slot_b));
    const auto& M = edge.gluing;
    // image of (fiber, section) of side a is given by the columns of M
    P.row(row++) = (fiber_a - BigInt(M(0, 0)) * fiber_b - BigInt(M(1, 0)) * section_b).transpose();
    P.row(row++) = (section_a - BigInt(M(0, 1)) * fiber_b - BigInt(M(1, 1)) * section_b).transpose();
  }

  out.group = h1_from_presentation(std::move(P), std::move(names));

  Eigen::Index distinguished_cols = 0;
  for (const auto& L : layouts) distinguished_cols += L.genus + 1 + L.fibers + L.deltas;
  out.group.distinguished = IntMatrix::Zero(generators, distinguished_cols);
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::vector<std::string> local;
    const IntMatrix D = distinguished_columns(layouts[i], pieces[i].exceptional(), local);
    out.group.distinguished.block(out.piece_offsets[i], col, D.rows(), D.cols()) = D;
    for (auto& n : local) out.group.distinguished_names.push_back("Y" + std::to_string(i) + "." + n);
    col += D.cols();
  }

  out.cycle_projection = IntMatrix::Zero(static_cast<Eigen::Index>(out.cycle_edges.size()), generators);
  for (Eigen::Index k = 0; k < out.cycle_projection.rows(); ++k) out.cycle_projection(k, offset + k) = 1;
  return out;
}

bool class_is_admissible(const GraphH1& h, const IntVector& element) { return h.project(element).isZero(); }

bool class_is_admissible(const GraphManifold& g, const IntVector& element) {
  return class_is_admissible(graph_h1(g), element);
}

bool class_is_maximal(const SeifertClosed& m, const HomologyClassExpr& c) {
  validate_class(m, c);
  return all_outside(c.lambda) && all_outside(c.alpha, m.unit_euler() ? 1 : 0);
}

bool class_is_maximal(const SeifertPiece& m, const HomologyClassExpr& c) {
  validate_class(m, c);
  return all_outside(c.lambda) && all_outside(c.alpha) && all_outside(c.tau);
}

bool class_is_maximal(const GraphManifold& g, const GraphClass& c) {
  validate_class(g, c);
  for (std::size_t i = 0; i < c.pieces.size(); ++i)
    if (!class_is_maximal(g.pieces()[i], c.pieces[i])) return false;
  return true;
}

HomologyClassExpr maximal_class(const SeifertClosed& m) {
  const auto d = class_dims(m);
  HomologyClassExpr c{CoeffVector::Constant(d.lambda, 2), CoeffVector::Constant(d.alpha, 2), CoeffVector(0)};
  if (m.unit_euler()) c.alpha(0) = 0;
  return c;
}

HomologyClassExpr maximal_class(const SeifertPiece& m) {
  const auto d = class_dims(m);
  return {CoeffVector::Constant(d.lambda, 2), CoeffVector::Constant(d.alpha, 2), CoeffVector::Constant(d.tau, 2)};
}

GraphClass maximal_class(const GraphManifold& g) {
  GraphClass c;
  for (const auto& p : g.pieces()) c.pieces.push_back(maximal_class(p));
  c.cycle = CoeffVector(0);
  return c;
}

}  // namespace msflow
