#include "msflow/planner.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

namespace msflow {

std::string_view to_string(Stability s) { return s == Stability::Attracting ? "attracting" : "repelling"; }

std::string_view to_string(OrbitKind k) {
  switch (k) {
    case OrbitKind::Attracting: return "attracting";
    case OrbitKind::Repelling: return "repelling";
    case OrbitKind::Saddle: return "saddle";
  }
  return "?";
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Lift: return "lift";
    case Provenance::TorusDestruction: return "torus_destruction";
    case Provenance::Wada5Cable: return "wada5_cable";
    case Provenance::Wada5Survivor: return "wada5_survivor";
    case Provenance::Reversal: return "reversal";
    case Provenance::HomotopyAdjust: return "homotopy_adjust";
  }
  return "?";
}

std::string_view to_string(CaseTag c) {
  switch (c) {
    case CaseTag::Case1: return "Case1";
    case CaseTag::Case2: return "Case2";
    case CaseTag::Case3: return "Case3";
    case CaseTag::Case4: return "Case4";
    case CaseTag::BoundedPiece: return "BoundedPiece";
  }
  return "?";
}

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::Lift: return "lift";
    case StepKind::DestroyTorus: return "destroy_torus";
    case StepKind::Wada5: return "wada5";
    case StepKind::ReverseLink: return "reverse_link";
    case StepKind::HomotopyAdjust: return "homotopy_adjust";
  }
  return "?";
}

namespace {

template <class Enum, std::size_t N>
Enum enum_from_string(const std::string& s, const Enum (&values)[N]) {
  for (auto v : values)
    if (to_string(v) == s) return v;
  throw Error(ErrorKind::MalformedSpec, "unknown enumerator '" + s + "'");
}

constexpr Stability kStabilities[] = {Stability::Attracting, Stability::Repelling};
constexpr OrbitKind kKinds[] = {OrbitKind::Attracting, OrbitKind::Repelling, OrbitKind::Saddle};
constexpr Provenance kProvenances[] = {Provenance::Lift,          Provenance::TorusDestruction, Provenance::Wada5Cable,
                                       Provenance::Wada5Survivor, Provenance::Reversal,         Provenance::HomotopyAdjust};
constexpr CaseTag kCases[] = {CaseTag::Case1, CaseTag::Case2, CaseTag::Case3, CaseTag::Case4, CaseTag::BoundedPiece};
constexpr StepKind kSteps[] = {StepKind::Lift, StepKind::DestroyTorus, StepKind::Wada5, StepKind::ReverseLink,
                               StepKind::HomotopyAdjust};

std::string indexed(const char* stem, int i) { return std::string(stem) + "_" + std::to_string(i); }

OrbitKind kind_of(Stability s) { return s == Stability::Attracting ? OrbitKind::Attracting : OrbitKind::Repelling; }

// Class of the curve a label names, with unit coefficient. Padding points and
// saddles sit on regular fibers, which carry the gamma_0 class.
HomologyClassExpr label_class(const std::string& label, const ClassDims& dims) {
  auto c = HomologyClassExpr::zero(dims);
  const auto us = label.rfind('_');
  if (us == std::string::npos) throw Error(ErrorKind::MalformedSpec, "bad orbit label '" + label + "'");
  const std::string stem = label.substr(0, us);
  Eigen::Index idx = 0;
  const auto tail = std::string_view(label).substr(us + 1);
  const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), idx);
  if (ec != std::errc{} || ptr != tail.data() + tail.size())
    throw Error(ErrorKind::MalformedSpec, "bad orbit label '" + label + "'");
  auto set = [&](CoeffVector& v, Eigen::Index i) {
    if (i < 0 || i >= v.size()) throw Error(ErrorKind::MalformedSpec, "label '" + label + "' out of range");
    v(i) = 1;
  };
  if (stem == "beta") set(c.lambda, idx - 1);
  else if (stem == "delta") set(c.tau, idx - 1);
  else if (stem == "gamma") set(c.alpha, idx);
  else set(c.alpha, 0);
  return c;
}

SurfaceSkeleton build_skeleton(int genus, std::vector<std::string> fiber_points, int deltas, CaseTag tag) {
  SurfaceSkeleton s;
  s.genus = genus;
  s.case_tag = tag;
  for (int i = 1; i <= genus; ++i)
    s.periodic_orbits.push_back({indexed("beta", i), i % 2 == 1 ? Stability::Attracting : Stability::Repelling});
  for (int c = 1; c <= deltas; ++c)
    s.periodic_orbits.push_back({indexed("delta", c), c % 2 == 1 ? Stability::Attracting : Stability::Repelling});

  // a gradient on the capped sphere needs at least two extrema
  while (static_cast<int>(fiber_points.size()) + 2 * genus < 2) fiber_points.push_back(indexed("x", ++s.padding));

  std::vector<std::string> extrema = fiber_points;
  for (int i = 1; i <= genus; ++i) {
    extrema.push_back(indexed("beta", i) + "+");
    extrema.push_back(indexed("beta", i) + "-");
  }
  for (std::size_t i = 0; i < extrema.size(); ++i) (i % 2 == 0 ? s.zero_handles : s.two_handles).push_back(extrema[i]);

  for (std::size_t i = 0; i < fiber_points.size(); ++i) {
    // minima are sources of the gradient, maxima are sinks
    const bool is_min = std::find(s.zero_handles.begin(), s.zero_handles.end(), fiber_points[i]) != s.zero_handles.end();
    s.singularities.push_back({fiber_points[i], 1, is_min ? Stability::Repelling : Stability::Attracting});
  }

  int saddle = 0;
  for (std::size_t i = 1; i < s.zero_handles.size(); ++i)
    s.one_handles.push_back({indexed("s", ++saddle), s.zero_handles[i - 1], s.zero_handles[i]});
  for (std::size_t j = 1; j < s.two_handles.size(); ++j)
    s.one_handles.push_back({indexed("s", ++saddle), s.zero_handles.front(), s.zero_handles.front()});
  for (const auto& h : s.one_handles) s.singularities.push_back({h.saddle, -1, Stability::Attracting});
  return s;
}

std::size_t find_torus(const Ledger& l, std::size_t piece, const std::string& label) {
  for (std::size_t i = 0; i < l.tori.size(); ++i)
    if (l.tori[i].piece == piece && l.tori[i].label == label) return i;
  throw Error(ErrorKind::UnknownTorus, "no invariant torus '" + label + "' on piece " + std::to_string(piece));
}

std::size_t orbit_index(const Ledger& l, int id) {
  for (std::size_t i = 0; i < l.orbits.size(); ++i)
    if (l.orbits[i].id == id) return i;
  throw Error(ErrorKind::UnknownOrbit, "no orbit with id " + std::to_string(id));
}

const ClassDims& dims_of(const Ledger& l, std::size_t piece) {
  if (piece >= l.piece_dims.size())
    throw Error(ErrorKind::PreconditionViolated, "piece " + std::to_string(piece) + " has not been lifted");
  return l.piece_dims[piece];
}

int lift_orbit_id(const Ledger& l, std::size_t piece, const std::string& label) {
  for (const auto& o : l.orbits)
    if (o.piece == piece && o.label == label && o.origin == Provenance::Lift) return o.id;
  throw Error(ErrorKind::NotFiberOrbit, "no lifted orbit '" + label + "'");
}

OrbitRecord& push_orbit(Ledger& l, OrbitKind kind, HomologyClassExpr cls, Provenance prov, std::string label,
                        std::size_t piece) {
  OrbitRecord o;
  o.id = l.next_id++;
  o.kind = kind;
  o.cls = std::move(cls);
  o.provenance = prov;
  o.origin = prov;
  o.label = std::move(label);
  o.piece = piece;
  l.orbits.push_back(std::move(o));
  return l.orbits.back();
}

// Steps shared by both plans: destroy every torus, cable every fiber orbit
// whose coefficient needs it, and collect the link to reverse.
void plan_piece(Ledger& l, std::size_t piece, const SurfaceSkeleton& skeleton, const HomologyClassExpr& c,
                std::vector<int>& link) {
  l = lift_step(std::move(l), skeleton, c.dims());
  for (const auto& orbit : skeleton.periodic_orbits) {
    const bool is_beta = orbit.label.rfind("beta", 0) == 0;
    const Eigen::Index idx = std::stoi(orbit.label.substr(orbit.label.find('_') + 1)) - 1;
    const Coeff target = is_beta ? c.lambda(idx) : c.tau(idx);
    l = destroy_torus_step(std::move(l), orbit.label, target != 0 ? target : 1, piece);
    if (target != 0) link.push_back(l.steps.back().created.front());
  }
  for (const auto& sing : skeleton.singularities) {
    if (sing.label.rfind("gamma_", 0) != 0) continue;
    const Coeff alpha = c.alpha(std::stoi(sing.label.substr(6)));
    if (alpha == 0) continue;
    if (alpha == 1) {
      link.push_back(lift_orbit_id(l, piece, sing.label));
      continue;
    }
    // alpha = -1 is cabled with q = -1 so that the reversed orbit carries -[gamma]
    l = wada5_step(std::move(l), sing.label, alpha, piece);
    link.push_back(l.steps.back().created.front());
  }
}

Coeff delta(bool b) { return b ? 1 : 0; }

void require_non_negative(Coeff v, const char* what) {
  if (v < 0) throw Error(ErrorKind::PreconditionViolated, std::string(what) + " must be non-negative");
}

}  // namespace

int SurfaceSkeleton::extremum_count() const {
  return static_cast<int>(std::count_if(singularities.begin(), singularities.end(), [](const auto& s) { return s.index == 1; }));
}

int SurfaceSkeleton::saddle_count() const {
  return static_cast<int>(std::count_if(singularities.begin(), singularities.end(), [](const auto& s) { return s.index == -1; }));
}

SurfaceSkeleton surface_skeleton(const SeifertClosed& m) {
  const int g = m.genus();
  const int n = m.exceptional_count();
  const bool unit = m.unit_euler();
  CaseTag tag;
  if (g == 0 && n == 0) tag = unit ? CaseTag::Case4 : CaseTag::Case3;
  else tag = unit ? CaseTag::Case2 : CaseTag::Case1;

  std::vector<std::string> points;
  // gamma_0 is a singular point only when it carries a class (|e| != 1)
  if (!unit) points.push_back(indexed("gamma", 0));
  for (int j = 1; j <= n; ++j) points.push_back(indexed("gamma", j));
  return build_skeleton(g, std::move(points), 0, tag);
}

SurfaceSkeleton surface_skeleton(const SeifertPiece& m) {
  std::vector<std::string> points;
  for (int j = 0; j <= m.exceptional_count(); ++j) points.push_back(indexed("gamma", j));
  return build_skeleton(m.genus(), std::move(points), m.boundary_count() - 1, CaseTag::BoundedPiece);
}

bool check_poincare_hopf(const SurfaceSkeleton& s) {
  int sum = 0;
  for (const auto& sing : s.singularities) sum += sing.index;
  return sum == 2 - 2 * s.genus;
}

bool check_handle_decomposition(const SurfaceSkeleton& s) {
  if (s.zero_handles.empty() || s.two_handles.empty()) return false;
  const auto extrema = s.zero_handles.size() + s.two_handles.size();
  if (s.one_handles.size() + 2 != extrema) return false;
  if (static_cast<std::size_t>(s.saddle_count()) != s.one_handles.size()) return false;
  auto is_zero_handle = [&](const std::string& label) {
    return std::find(s.zero_handles.begin(), s.zero_handles.end(), label) != s.zero_handles.end();
  };
  return std::all_of(s.one_handles.begin(), s.one_handles.end(),
                     [&](const OneHandle& h) { return is_zero_handle(h.foot_a) && is_zero_handle(h.foot_b); });
}

const OrbitRecord& Ledger::orbit(int id) const { return orbits[orbit_index(*this, id)]; }

Ledger lift_step(Ledger ledger, const SurfaceSkeleton& skeleton, const ClassDims& dims) {
  const std::size_t piece = ledger.piece_dims.size();
  ledger.piece_dims.push_back(dims);
  ledger.d2.push_back(HomologyClassExpr::zero(dims));

  LedgerStep step;
  step.kind = StepKind::Lift;
  step.piece = piece;
  step.skeleton = skeleton;
  step.dims = dims;
  for (const auto& orbit : skeleton.periodic_orbits) {
    label_class(orbit.label, dims);  // range check
    ledger.tori.push_back({piece, orbit.label, orbit.stability});
  }
  for (const auto& sing : skeleton.singularities) {
    const auto kind = sing.index < 0 ? OrbitKind::Saddle : kind_of(sing.stability);
    step.created.push_back(push_orbit(ledger, kind, label_class(sing.label, dims), Provenance::Lift, sing.label, piece).id);
  }
  ledger.steps.push_back(std::move(step));
  return ledger;
}

Ledger destroy_torus_step(Ledger ledger, const std::string& label, Coeff lambda, std::size_t piece) {
  const auto t = find_torus(ledger, piece, label);
  if (lambda == 0) throw Error(ErrorKind::ZeroCoefficient, "torus destruction needs lambda != 0");
  const auto torus = ledger.tori[t];
  const auto cls = lambda * label_class(label, dims_of(ledger, piece));
  ledger.tori.erase(ledger.tori.begin() + static_cast<std::ptrdiff_t>(t));

  LedgerStep step;
  step.kind = StepKind::DestroyTorus;
  step.piece = piece;
  step.label = label;
  step.parameter = lambda;
  step.created.push_back(push_orbit(ledger, kind_of(torus.stability), cls, Provenance::TorusDestruction, label, piece).id);
  step.created.push_back(push_orbit(ledger, OrbitKind::Saddle, cls, Provenance::TorusDestruction, label, piece).id);
  ledger.steps.push_back(std::move(step));
  return ledger;
}

Coeff wada5_cable_p(Coeff q) {
  Coeff p = 1;
  while (std::gcd(p, q < 0 ? -q : q) != 1) ++p;
  return p;
}

Ledger wada5_step(Ledger ledger, const std::string& label, Coeff q, std::size_t piece) {
  auto it = std::find_if(ledger.orbits.begin(), ledger.orbits.end(), [&](const OrbitRecord& o) {
    return o.piece == piece && o.label == label && o.provenance == Provenance::Lift;
  });
  if (it == ledger.orbits.end() || it->kind == OrbitKind::Saddle)
    throw Error(ErrorKind::NotFiberOrbit, "'" + label + "' is not an attracting or repelling lifted fiber orbit");
  if (q == 0) throw Error(ErrorKind::ZeroCoefficient, "cable parameter q must be non-zero");

  it->provenance = Provenance::Wada5Survivor;
  it->origin = Provenance::Wada5Survivor;
  const auto kind = it->kind;
  const auto cls = q * label_class(label, dims_of(ledger, piece));
  const Coeff p = wada5_cable_p(q);

  LedgerStep step;
  step.kind = StepKind::Wada5;
  step.piece = piece;
  step.label = label;
  step.parameter = q;
  for (auto k : {kind, OrbitKind::Saddle}) {
    auto& o = push_orbit(ledger, k, cls, Provenance::Wada5Cable, label, piece);
    o.cable = std::make_pair(p, q);
    step.created.push_back(o.id);
  }
  ledger.steps.push_back(std::move(step));
  return ledger;
}

Ledger reverse_link_step(Ledger ledger, const std::vector<int>& link) {
  std::set<int> seen;
  for (int id : link) {
    const auto& o = ledger.orbits[orbit_index(ledger, id)];
    if (o.kind == OrbitKind::Saddle)
      throw Error(ErrorKind::SaddleInLink, "orbit " + std::to_string(id) + " is a saddle and cannot be reversed");
    if (o.provenance == Provenance::Reversal || !seen.insert(id).second)
      throw Error(ErrorKind::AlreadyReversed, "orbit " + std::to_string(id) + " is reversed twice");
  }
  for (int id : link) {
    auto& o = ledger.orbits[orbit_index(ledger, id)];
    o.provenance = Provenance::Reversal;
    ledger.d2[o.piece] += o.cls;
  }
  LedgerStep step;
  step.kind = StepKind::ReverseLink;
  step.link = link;
  ledger.steps.push_back(std::move(step));
  return ledger;
}

Ledger homotopy_adjust_step(Ledger ledger) {
  if (ledger.adjusted) throw Error(ErrorKind::AlreadyAdjusted, "homotopy class was already adjusted");
  const auto& dims = dims_of(ledger, 0);
  auto fiber = HomologyClassExpr::zero(dims);
  fiber.alpha(0) = 1;
  // three canceling pairs (gamma, -gamma)
  const std::pair<OrbitKind, OrbitKind> pairs[] = {{OrbitKind::Attracting, OrbitKind::Saddle},
                                                   {OrbitKind::Repelling, OrbitKind::Saddle},
                                                   {OrbitKind::Attracting, OrbitKind::Repelling}};
  LedgerStep step;
  step.kind = StepKind::HomotopyAdjust;
  int n = 0;
  for (const auto& [first, second] : pairs) {
    step.created.push_back(push_orbit(ledger, first, fiber, Provenance::HomotopyAdjust, indexed("adjust", ++n), 0).id);
    step.created.push_back(push_orbit(ledger, second, -fiber, Provenance::HomotopyAdjust, indexed("adjust", ++n), 0).id);
  }
  ledger.adjusted = true;
  ledger.steps.push_back(std::move(step));
  return ledger;
}

Ledger plan_seifert(const SeifertClosed& m, const HomologyClassExpr& c) {
  validate_class(m, c);
  Ledger l;
  l.manifold = print_seifert(m);
  l.target_class = nlohmann::json::array({class_to_json(c)});
  std::vector<int> link;
  plan_piece(l, 0, surface_skeleton(m), c, link);
  l = reverse_link_step(std::move(l), link);
  return homotopy_adjust_step(std::move(l));
}

Ledger plan_graph(const GraphManifold& g, const GraphClass& c) {
  validate_class(g, c);
  if (g.piece_count() < 2) throw Error(ErrorKind::SinglePiece, "graph plans need at least two pieces");
  for (Eigen::Index k = 0; k < c.cycle.size(); ++k)
    if (c.cycle(k) != 0)
      throw Error(ErrorKind::PreconditionViolated, "class is not admissible: cycle coordinate " + std::to_string(k + 1) +
                                                       " is " + std::to_string(c.cycle(k)));
  Ledger l;
  l.manifold = graph_to_json(g);
  l.target_class = nlohmann::json::array();
  std::vector<int> link;
  for (std::size_t i = 0; i < g.piece_count(); ++i) {
    l.target_class.push_back(class_to_json(c.pieces[i]));
    l.reference_offsets.push_back("e_" + std::to_string(i + 1));
    plan_piece(l, i, surface_skeleton(g.pieces()[i]), c.pieces[i], link);
  }
  l = reverse_link_step(std::move(l), link);
  return homotopy_adjust_step(std::move(l));
}

Ledger replay(const std::vector<LedgerStep>& steps) {
  Ledger l;
  for (const auto& s : steps) {
    switch (s.kind) {
      case StepKind::Lift:
        if (!s.skeleton) throw Error(ErrorKind::MalformedSpec, "lift step without skeleton");
        l = lift_step(std::move(l), *s.skeleton, s.dims);
        break;
      case StepKind::DestroyTorus: l = destroy_torus_step(std::move(l), s.label, s.parameter, s.piece); break;
      case StepKind::Wada5: l = wada5_step(std::move(l), s.label, s.parameter, s.piece); break;
      case StepKind::ReverseLink: l = reverse_link_step(std::move(l), s.link); break;
      case StepKind::HomotopyAdjust: l = homotopy_adjust_step(std::move(l)); break;
    }
  }
  return l;
}

nlohmann::json to_json(const SurfaceSkeleton& s) {
  nlohmann::json periodic = nlohmann::json::array();
  for (const auto& o : s.periodic_orbits) periodic.push_back({{"label", o.label}, {"stability", to_string(o.stability)}});
  nlohmann::json sings = nlohmann::json::array();
  for (const auto& x : s.singularities) {
    nlohmann::json j = {{"label", x.label}, {"index", x.index}};
    if (x.index > 0) j["stability"] = to_string(x.stability);
    sings.push_back(j);
  }
  nlohmann::json handles = nlohmann::json::array();
  for (const auto& h : s.one_handles) handles.push_back({h.saddle, h.foot_a, h.foot_b});
  return {{"genus", s.genus},
          {"case", to_string(s.case_tag)},
          {"periodic_orbits", periodic},
          {"singularities", sings},
          {"zero_handles", s.zero_handles},
          {"two_handles", s.two_handles},
          {"one_handles", handles},
          {"padding", s.padding}};
}

SurfaceSkeleton skeleton_from_json(const nlohmann::json& j) {
  SurfaceSkeleton s;
  s.genus = j.at("genus").get<int>();
  s.case_tag = enum_from_string(j.at("case").get<std::string>(), kCases);
  for (const auto& o : j.at("periodic_orbits"))
    s.periodic_orbits.push_back({o.at("label").get<std::string>(), enum_from_string(o.at("stability").get<std::string>(), kStabilities)});
  for (const auto& x : j.at("singularities")) {
    SkeletonSingularity sing{x.at("label").get<std::string>(), x.at("index").get<int>(), Stability::Attracting};
    if (x.contains("stability")) sing.stability = enum_from_string(x.at("stability").get<std::string>(), kStabilities);
    s.singularities.push_back(sing);
  }
  s.zero_handles = j.at("zero_handles").get<std::vector<std::string>>();
  s.two_handles = j.at("two_handles").get<std::vector<std::string>>();
  for (const auto& h : j.at("one_handles"))
    s.one_handles.push_back({h.at(0).get<std::string>(), h.at(1).get<std::string>(), h.at(2).get<std::string>()});
  s.padding = j.at("padding").get<int>();
  return s;
}

nlohmann::json to_json(const OrbitRecord& o) {
  nlohmann::json j = {{"id", o.id},
                      {"kind", to_string(o.kind)},
                      {"class", class_to_json(o.cls)},
                      {"provenance", to_string(o.provenance)},
                      {"label", o.label},
                      {"piece", o.piece}};
  if (o.origin != o.provenance) j["origin"] = to_string(o.origin);
  if (o.cable) j["cable"] = {o.cable->first, o.cable->second};
  return j;
}

nlohmann::json to_json(const LedgerStep& s) {
  nlohmann::json j = {{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case StepKind::Lift:
      j["piece"] = s.piece;
      j["dims"] = {s.dims.lambda, s.dims.alpha, s.dims.tau};
      j["skeleton"] = to_json(*s.skeleton);
      break;
    case StepKind::DestroyTorus:
      j["piece"] = s.piece;
      j["label"] = s.label;
      j["lambda"] = s.parameter;
      break;
    case StepKind::Wada5:
      j["piece"] = s.piece;
      j["label"] = s.label;
      j["q"] = s.parameter;
      break;
    case StepKind::ReverseLink: j["link"] = s.link; break;
    case StepKind::HomotopyAdjust: break;
  }
  if (!s.created.empty()) j["created"] = s.created;
  return j;
}

LedgerStep step_from_json(const nlohmann::json& j) {
  LedgerStep s;
  s.kind = enum_from_string(j.at("kind").get<std::string>(), kSteps);
  if (j.contains("piece")) s.piece = j.at("piece").get<std::size_t>();
  if (j.contains("label")) s.label = j.at("label").get<std::string>();
  if (j.contains("lambda")) s.parameter = j.at("lambda").get<Coeff>();
  if (j.contains("q")) s.parameter = j.at("q").get<Coeff>();
  if (j.contains("link")) s.link = j.at("link").get<std::vector<int>>();
  if (j.contains("created")) s.created = j.at("created").get<std::vector<int>>();
  if (j.contains("dims")) {
    const auto d = j.at("dims").get<std::vector<Eigen::Index>>();
    if (d.size() != 3) throw Error(ErrorKind::MalformedSpec, "dims must have three entries");
    s.dims = {d[0], d[1], d[2]};
  }
  if (j.contains("skeleton")) s.skeleton = skeleton_from_json(j.at("skeleton"));
  return s;
}

nlohmann::json to_json(const Ledger& l) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : l.steps) steps.push_back(to_json(s));
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : l.orbits) orbits.push_back(to_json(o));
  nlohmann::json d2 = nlohmann::json::array();
  for (const auto& c : l.d2) d2.push_back(class_to_json(c));
  nlohmann::json j = {{"manifold", l.manifold}, {"target_class", l.target_class}};
  if (!l.reference_offsets.empty()) j["reference_offsets"] = l.reference_offsets;
  j["steps"] = steps;
  j["orbits"] = orbits;
  j["d2"] = d2;
  j["total"] = l.total();
  return j;
}

std::vector<LedgerStep> steps_from_json(const nlohmann::json& ledger_json) {
  std::vector<LedgerStep> steps;
  for (const auto& s : ledger_json.at("steps")) steps.push_back(step_from_json(s));
  return steps;
}

Coeff bound_seifert(Coeff genus, Coeff euler, Coeff exceptional) {
  require_non_negative(genus, "genus");
  require_non_negative(exceptional, "exceptional orbit count");
  const Coeff unit = delta(euler == 1 || euler == -1);
  return 4 * genus + 4 * exceptional + 8 - 4 * unit + 2 * (1 + unit) * delta(genus == 0) * delta(exceptional == 0);
}

Coeff bound_piece(Coeff genus, Coeff exceptional, Coeff boundary) {
  require_non_negative(genus, "genus");
  require_non_negative(exceptional, "exceptional orbit count");
  if (boundary < 1) throw Error(ErrorKind::PreconditionViolated, "a piece has at least one boundary torus");
  return 4 * genus + 4 * exceptional + 8 + 2 * delta(genus == 0) * delta(exceptional == 0) + 2 * (boundary - 1);
}

Coeff graph_beta(const GraphManifold& g) {
  Coeff sum = 0;
  for (const auto& p : g.pieces()) {
    const Coeff gi = p.genus(), ni = p.exceptional_count(), ki = p.boundary_count();
    sum += 2 * gi + 2 * ni + delta(gi == 0) * delta(ni == 0) + ki;
  }
  return 2 * sum;
}

Coeff bound_graph(const GraphManifold& g) {
  if (g.piece_count() < 2) throw Error(ErrorKind::SinglePiece, "graph bound needs at least two JSJ pieces");
  return 6 + graph_beta(g);
}

Coeff bound_sum(const std::vector<GraphManifold>& components) {
  return std::accumulate(components.begin(), components.end(), Coeff{6},
                         [](Coeff acc, const GraphManifold& g) { return acc + graph_beta(g); });
}

}  // namespace msflow
