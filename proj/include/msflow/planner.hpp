#pragma once

// Orbit-count planning for non-singular Morse-Smale fields on Seifert and
// graph manifolds.
//
// A plan replays the construction as a ledger of steps:
//   lift             base skeleton -> fiber orbits over singular points and
//                    invariant tori over base periodic orbits
//   destroy_torus    invariant torus -> two (lambda,1)-curve orbits
//   wada5            fiber orbit -> survivor plus two (p,q)-cables
//   reverse_link     flip attracting/repelling orbits; d2 += their classes
//   homotopy_adjust  six class-neutral orbits fixing the homotopy class
// The orbit total of a maximal class is compared against closed-form bounds.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "msflow/manifold.hpp"

namespace msflow {

enum class Stability { Attracting, Repelling };
enum class OrbitKind { Attracting, Repelling, Saddle };
enum class Provenance { Lift, TorusDestruction, Wada5Cable, Wada5Survivor, Reversal, HomotopyAdjust };
enum class CaseTag { Case1, Case2, Case3, Case4, BoundedPiece };
enum class StepKind { Lift, DestroyTorus, Wada5, ReverseLink, HomotopyAdjust };

std::string_view to_string(Stability s);
std::string_view to_string(OrbitKind k);
std::string_view to_string(Provenance p);
std::string_view to_string(CaseTag c);
std::string_view to_string(StepKind k);

struct SkeletonOrbit {
  std::string label;  // beta_i or delta_c
  Stability stability = Stability::Attracting;
};

struct SkeletonSingularity {
  std::string label;  // gamma_j, x_k (padding) or s_k (saddle)
  int index = 1;      // +1 attractor/repellor, -1 saddle
  Stability stability = Stability::Attracting;
};

/// 1-handle of the capped-sphere handle decomposition; both feet sit on
/// 0-handles (named by their extremum label).
struct OneHandle {
  std::string saddle;
  std::string foot_a;
  std::string foot_b;
};

/// Morse-Smale skeleton on the base surface. The handle decomposition lives
/// on the sphere obtained by cutting along the beta curves and capping; its
/// extrema are the caps (two per beta curve) and the fiber points.
struct SurfaceSkeleton {
  int genus = 0;
  CaseTag case_tag = CaseTag::Case1;
  std::vector<SkeletonOrbit> periodic_orbits;
  std::vector<SkeletonSingularity> singularities;
  std::vector<std::string> zero_handles;
  std::vector<std::string> two_handles;
  std::vector<OneHandle> one_handles;
  int padding = 0;

  int extremum_count() const;
  int saddle_count() const;
};

SurfaceSkeleton surface_skeleton(const SeifertClosed& m);
SurfaceSkeleton surface_skeleton(const SeifertPiece& m);

/// #(attractors/repellors) - #(saddles) == 2 - 2g.
bool check_poincare_hopf(const SurfaceSkeleton& s);
/// Every 1-handle attaches to 0-handles only, and there are exactly
/// #extrema - 2 of them on the capped sphere.
bool check_handle_decomposition(const SurfaceSkeleton& s);

struct OrbitRecord {
  int id = 0;
  OrbitKind kind = OrbitKind::Attracting;
  HomologyClassExpr cls;
  Provenance provenance = Provenance::Lift;
  /// Provenance before a reversal; equals provenance otherwise.
  Provenance origin = Provenance::Lift;
  std::optional<std::pair<Coeff, Coeff>> cable;
  std::string label;
  std::size_t piece = 0;
};

struct InvariantTorus {
  std::size_t piece = 0;
  std::string label;
  Stability stability = Stability::Attracting;
};

struct LedgerStep {
  StepKind kind = StepKind::Lift;
  std::size_t piece = 0;
  std::string label;
  Coeff parameter = 0;
  /// ReverseLink: the reversed orbit ids.
  std::vector<int> link;
  /// Lift: the skeleton and the class shape of the piece.
  std::optional<SurfaceSkeleton> skeleton;
  ClassDims dims;
  /// Ids of orbits created by the step; for destroy_torus and wada5 the first
  /// one is the non-saddle replacement orbit.
  std::vector<int> created;
};

struct Ledger {
  nlohmann::json manifold;
  nlohmann::json target_class;
  std::vector<std::string> reference_offsets;
  std::vector<ClassDims> piece_dims;
  std::vector<LedgerStep> steps;
  std::vector<OrbitRecord> orbits;
  std::vector<InvariantTorus> tori;
  std::vector<HomologyClassExpr> d2;
  bool adjusted = false;
  int next_id = 0;

  std::size_t total() const { return orbits.size(); }
  const OrbitRecord& orbit(int id) const;
};

Ledger lift_step(Ledger ledger, const SurfaceSkeleton& skeleton, const ClassDims& dims);
Ledger destroy_torus_step(Ledger ledger, const std::string& label, Coeff lambda, std::size_t piece = 0);
Ledger wada5_step(Ledger ledger, const std::string& label, Coeff q, std::size_t piece = 0);
Ledger reverse_link_step(Ledger ledger, const std::vector<int>& link);
Ledger homotopy_adjust_step(Ledger ledger);

/// Smallest p >= 1 with gcd(p, q) = 1.
Coeff wada5_cable_p(Coeff q);

Ledger plan_seifert(const SeifertClosed& m, const HomologyClassExpr& c);
/// Per-piece classes stand for c_i - e_i, with e_i the symbolic reference
/// offset of piece i. Non-zero cycle coordinates are refused.
Ledger plan_graph(const GraphManifold& g, const GraphClass& c);

/// Applies the recorded steps to an empty ledger.
Ledger replay(const std::vector<LedgerStep>& steps);

nlohmann::json to_json(const SurfaceSkeleton& s);
SurfaceSkeleton skeleton_from_json(const nlohmann::json& j);
nlohmann::json to_json(const OrbitRecord& o);
nlohmann::json to_json(const LedgerStep& s);
LedgerStep step_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Ledger& l);
std::vector<LedgerStep> steps_from_json(const nlohmann::json& ledger_json);

Coeff bound_seifert(Coeff genus, Coeff euler, Coeff exceptional);
Coeff bound_piece(Coeff genus, Coeff exceptional, Coeff boundary);
/// 2 * sum_i (2 g_i + 2 n_i + [g_i = n_i = 0] + k_i).
Coeff graph_beta(const GraphManifold& g);
Coeff bound_graph(const GraphManifold& g);
Coeff bound_sum(const std::vector<GraphManifold>& components);

}  // namespace msflow
