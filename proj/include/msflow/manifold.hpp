#pragma once

// Symbolic presentations of Seifert manifolds and graph manifolds.
//
// A closed Seifert manifold F^g_e(p_1/q_1, ..., p_n/q_n) is the circle bundle
// of Euler number e over a genus-g surface, modified by surgeries along n
// regular fibers. A Seifert piece has a bounded base (k >= 1 boundary circles)
// and is a trivial bundle away from its exceptional fibers. A graph manifold
// glues pieces along their boundary tori.
//
// Boundary tori carry the ordered basis (fiber h, section delta). A gluing
// matrix [[a, b], [c, d]] sends the fiber of the first endpoint to a*h + c*delta
// and the section to b*h + d*delta on the second endpoint (it acts on columns).

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "msflow/error.hpp"

namespace msflow {

using Coeff = std::int64_t;
using CoeffVector = Eigen::Matrix<Coeff, Eigen::Dynamic, 1>;
using Gluing = Eigen::Matrix<Coeff, 2, 2>;

/// Surgery coefficient p/q of an exceptional fiber: gcd(|p|,|q|) = 1, q != 0
/// and p outside {-1, 0, 1}.
class SurgeryCoefficient {
 public:
  SurgeryCoefficient(Coeff p, Coeff q);

  Coeff p() const { return p_; }
  Coeff q() const { return q_; }

  friend bool operator==(const SurgeryCoefficient&, const SurgeryCoefficient&) = default;

 private:
  Coeff p_;
  Coeff q_;
};

class SeifertClosed {
 public:
  SeifertClosed(int genus, Coeff euler, std::vector<SurgeryCoefficient> exceptional = {});

  int genus() const { return genus_; }
  Coeff euler() const { return euler_; }
  const std::vector<SurgeryCoefficient>& exceptional() const { return exceptional_; }
  int exceptional_count() const { return static_cast<int>(exceptional_.size()); }
  /// |e| = 1: the regular fiber bounds and gamma_0 carries no class.
  bool unit_euler() const { return euler_ == 1 || euler_ == -1; }

  friend bool operator==(const SeifertClosed&, const SeifertClosed&) = default;

 private:
  int genus_;
  Coeff euler_;
  std::vector<SurgeryCoefficient> exceptional_;
};

class SeifertPiece {
 public:
  SeifertPiece(int genus, int boundary_count, std::vector<SurgeryCoefficient> exceptional = {});

  int genus() const { return genus_; }
  int boundary_count() const { return boundary_count_; }
  const std::vector<SurgeryCoefficient>& exceptional() const { return exceptional_; }
  int exceptional_count() const { return static_cast<int>(exceptional_.size()); }

  friend bool operator==(const SeifertPiece&, const SeifertPiece&) = default;

 private:
  int genus_;
  int boundary_count_;
  std::vector<SurgeryCoefficient> exceptional_;
};

struct GraphEdge {
  std::size_t piece_a = 0;
  std::size_t slot_a = 0;
  std::size_t piece_b = 0;
  std::size_t slot_b = 0;
  Gluing gluing = Gluing::Identity();

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

/// Connected gluing of Seifert pieces in which every boundary slot is used by
/// exactly one edge endpoint and every gluing matrix is unimodular.
class GraphManifold {
 public:
  GraphManifold(std::vector<SeifertPiece> pieces, std::vector<GraphEdge> edges);

  const std::vector<SeifertPiece>& pieces() const { return pieces_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  std::size_t piece_count() const { return pieces_.size(); }
  /// First Betti number of the gluing multigraph, |E| - |V| + 1.
  std::size_t cycle_rank() const { return edges_.size() + 1 - pieces_.size(); }

  friend bool operator==(const GraphManifold&, const GraphManifold&) = default;

 private:
  std::vector<SeifertPiece> pieces_;
  std::vector<GraphEdge> edges_;
};

/// Lengths of the (lambda, alpha, tau) coordinate blocks: (g, n + 1, k - 1).
struct ClassDims {
  Eigen::Index lambda = 0;
  Eigen::Index alpha = 1;
  Eigen::Index tau = 0;

  friend bool operator==(const ClassDims&, const ClassDims&) = default;
};

ClassDims class_dims(const SeifertClosed& m);
ClassDims class_dims(const SeifertPiece& m);

/// Integer combination sum lambda_a[beta_a] + sum alpha_b[gamma_b] + sum tau_c[delta_c].
/// alpha is indexed from gamma_0 (the core of the -1/e surgery, or a regular
/// fiber on a bounded piece); tau is empty for closed manifolds.
struct HomologyClassExpr {
  CoeffVector lambda;
  CoeffVector alpha;
  CoeffVector tau;

  static HomologyClassExpr zero(const ClassDims& dims);

  ClassDims dims() const { return {lambda.size(), alpha.size(), tau.size()}; }
  bool is_zero() const;

  HomologyClassExpr& operator+=(const HomologyClassExpr& other);
  friend HomologyClassExpr operator+(HomologyClassExpr a, const HomologyClassExpr& b) { return a += b; }
  friend HomologyClassExpr operator*(Coeff s, HomologyClassExpr a);
  friend HomologyClassExpr operator-(HomologyClassExpr a) { return Coeff{-1} * std::move(a); }
  friend bool operator==(const HomologyClassExpr& a, const HomologyClassExpr& b);
};

/// Per-piece classes of a graph manifold plus optional coordinates on the
/// cycle space of the gluing graph (empty means zero).
struct GraphClass {
  std::vector<HomologyClassExpr> pieces;
  CoeffVector cycle;
};

SeifertClosed parse_seifert(std::string_view text);
std::string print_seifert(const SeifertClosed& m);

GraphManifold parse_graph(std::string_view document);
GraphManifold graph_from_json(const nlohmann::json& doc);
nlohmann::json graph_to_json(const GraphManifold& g);
std::string print_graph(const GraphManifold& g);

/// Class spec "lambda=2,3;alpha=2,5;tau=4"; missing keys mean empty blocks.
HomologyClassExpr parse_class(std::string_view text);
std::string print_class(const HomologyClassExpr& c);
/// Graph class spec: per-piece class specs separated by '|', optionally
/// followed by a "cycle=1,0" segment.
GraphClass parse_graph_class(std::string_view text);

nlohmann::json class_to_json(const HomologyClassExpr& c);
HomologyClassExpr class_from_json(const nlohmann::json& j);

const HomologyClassExpr& validate_class(const SeifertClosed& m, const HomologyClassExpr& c);
const HomologyClassExpr& validate_class(const SeifertPiece& m, const HomologyClassExpr& c);
const GraphClass& validate_class(const GraphManifold& m, const GraphClass& c);

}  // namespace msflow
