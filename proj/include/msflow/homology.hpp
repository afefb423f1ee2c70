#pragma once

// First homology of Seifert and graph manifolds from explicit presentations.
//
// Closed F^g_e(p_1/q_1, ..., p_n/q_n): generators a_1, b_1, ..., a_g, b_g, h,
// mu_1, ..., mu_n with relations
//     mu_1 + ... + mu_n = e * h          (closing relation of the bundle)
//     q_j * h + p_j * mu_j = 0           (one per exceptional fiber).
// Distinguished elements: [beta_i] = a_i, [gamma_0] = h and
// [gamma_j] = r_j * mu_j + s_j * h with p_j s_j - q_j r_j = 1, 0 <= s_j < |q_j|.
//
// A bounded piece adds boundary sections delta_1, ..., delta_{k-1} (the last
// boundary section equals -(sum mu_j + sum delta_c)) and drops the closing
// relation. Graph manifolds glue piece presentations along edges and add one
// free generator per independent cycle of the gluing graph.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "msflow/int_matrix.hpp"
#include "msflow/manifold.hpp"

namespace msflow {

struct H1Group {
  Eigen::Index free_rank = 0;
  std::vector<BigInt> invariant_factors;
  /// Rows are relations, columns are generators.
  IntMatrix presentation;
  std::vector<std::string> generator_names;
  /// Columns are the distinguished classes beta_*, gamma_*, delta_* in
  /// generator coordinates.
  IntMatrix distinguished;
  std::vector<std::string> distinguished_names;

  Eigen::Index generator_count() const { return presentation.cols(); }
  bool is_trivial() const { return free_rank == 0 && invariant_factors.empty(); }
  /// Product of the invariant factors (1 for a torsion-free group).
  BigInt torsion_order() const;
  /// "Z^r ⊕ Z/d1 ⊕ ...", or "0" for the trivial group.
  std::string to_string() const;
  /// True iff the element (generator coordinates) vanishes in the group.
  bool is_zero(const IntVector& element) const;
  /// Generator coordinates of a class given in the distinguished basis.
  IntVector embed(const HomologyClassExpr& c) const;
};

/// Builds the group from a presentation (relations x generators) via SNF.
H1Group h1_from_presentation(IntMatrix presentation, std::vector<std::string> generator_names);

/// (r, s) with p*s - q*r = 1 and 0 <= s < |q|.
std::pair<Coeff, Coeff> core_coefficients(const SurgeryCoefficient& c);

H1Group seifert_h1(const SeifertClosed& m);
H1Group piece_h1(const SeifertPiece& m);

struct GraphH1 {
  H1Group group;
  /// b1(graph) x generators; sends a class to its coordinates in H1 of the
  /// gluing graph.
  IntMatrix cycle_projection;
  std::vector<Eigen::Index> piece_offsets;
  Eigen::Index cycle_offset = 0;
  /// Edge indices that carry a cycle generator (non-tree edges).
  std::vector<std::size_t> cycle_edges;

  IntVector embed(const GraphClass& c) const;
  IntVector project(const IntVector& element) const;
};

GraphH1 graph_h1(const GraphManifold& g);

bool class_is_admissible(const GraphH1& h, const IntVector& element);
bool class_is_admissible(const GraphManifold& g, const IntVector& element);

bool class_is_maximal(const SeifertClosed& m, const HomologyClassExpr& c);
bool class_is_maximal(const SeifertPiece& m, const HomologyClassExpr& c);
bool class_is_maximal(const GraphManifold& g, const GraphClass& c);

/// The all-2 class (alpha_0 = 0 when |e| = 1); maximal by construction.
HomologyClassExpr maximal_class(const SeifertClosed& m);
HomologyClassExpr maximal_class(const SeifertPiece& m);
GraphClass maximal_class(const GraphManifold& g);

}  // namespace msflow
