#include "qbdshift/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qbdshift/errors.hpp"

namespace qbd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

double diff(const Matrix& a, const Matrix& b) { return inf_norm(Matrix(a - b)); }

double max_entry_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

std::vector<int> support(const Vector& x, bool positive) {
  const double threshold = kSignZeroRelative * std::max(max_abs(x), std::numeric_limits<double>::min());
  std::vector<int> out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x(i) > threshold) == positive) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::string describe(const std::vector<int>& set) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < set.size(); ++i) os << (i ? "," : "") << set[i];
  os << "}";
  return os.str();
}

// The pattern has one nontrivial class equal to `cls`; every other class is
// a trivial singleton.  With `into_cls_forbidden` there may be no edge from
// the complement into cls (the R layout), otherwise no edge leaves cls (G).
void check_single_class(const Matrix& m, const std::vector<int>& cls, bool into_cls_forbidden,
                        const char* what) {
  const double threshold = 1e-12 * std::max(m.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const std::vector<Component> comps = scc_partition(m, threshold);
  int nontrivial = 0;
  for (const Component& c : comps) {
    if (!c.nontrivial) continue;
    ++nontrivial;
    if (c.members != cls) {
      throw VerificationError(std::string("phase_partition: the irreducible class of ") + what + " is " +
                              describe(c.members) + " but the Perron support is " + describe(cls));
    }
  }
  if (nontrivial != 1) {
    throw VerificationError(std::string("phase_partition: ") + what + " has " + std::to_string(nontrivial) +
                            " irreducible classes, expected one");
  }
  std::vector<char> in(static_cast<std::size_t>(m.rows()), 0);
  for (int i : cls) in[static_cast<std::size_t>(i)] = 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!(m(i, j) > threshold)) continue;
      const bool bad = into_cls_forbidden ? (!in[i] && in[j]) : (in[i] && !in[j]);
      if (bad) {
        throw VerificationError(std::string("phase_partition: unexpected edge ") + std::to_string(i) + " -> " +
                                std::to_string(j) + " in the pattern of " + what);
      }
    }
  }
}

std::vector<Root> snap_roots(std::vector<Root> roots, const Classification& cls, int* xi_n_index,
                             int* xi_n1_index) {
  auto nearest = [&](double target, int skip) {
    int best = -1;
    double dist = kInf;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      if (static_cast<int>(i) == skip || roots[i].infinite) continue;
      const double d = std::abs(roots[i].value - target);
      if (d < dist) {
        dist = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  };
  const int a = nearest(cls.xi_n, -1);
  if (a < 0) throw VerificationError("expected_shifted_roots: no finite root near xi_n");
  roots[static_cast<std::size_t>(a)] = Root{Complex(cls.xi_n, 0.0), false};
  int b = -1;
  if (std::isfinite(cls.xi_n1)) {
    b = nearest(cls.xi_n1, a);
    if (b >= 0) roots[static_cast<std::size_t>(b)] = Root{Complex(cls.xi_n1, 0.0), false};
  }
  if (xi_n_index) *xi_n_index = a;
  if (xi_n1_index) *xi_n1_index = b;
  return roots;
}

// Spectrum of m with the eigenvalue nearest `target` snapped and then replaced by 0.
std::vector<Root> replaced_spectrum(const Matrix& m, double target) {
  std::vector<Root> s = spectrum(m);
  int best = -1;
  double dist = kInf;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = std::abs(s[i].value - target);
    if (d < dist) {
      dist = d;
      best = static_cast<int>(i);
    }
  }
  if (best >= 0) s[static_cast<std::size_t>(best)] = Root{Complex(0.0, 0.0), false};
  return s;
}

Certificate factorization_certificate(std::string name, const QuadMatPoly& poly, Direction dir,
                                      const Matrix& left, const Matrix& middle, const Matrix& right,
                                      const SuiteOptions& opt) {
  try {
    const Factorization f = Factorization::make(dir, left, middle, right);
    const double res = factorization_residual(poly, f, opt.samples);
    return certify(std::move(name), res, opt.identity,
                   f.strength == Strength::Canonical ? "canonical" : "weak canonical");
  } catch (const Error& e) {
    Certificate c = certify(std::move(name), kInf, opt.identity, e.what());
    return c;
  }
}

Complex det_factor(ShiftKind kind, Complex z, double xi_n, double xi_n1) {
  switch (kind) {
    case ShiftKind::Right: return z / (z - xi_n);
    case ShiftKind::Left: return -xi_n1 / (z - xi_n1);
    case ShiftKind::Double: return -xi_n1 * z / ((z - xi_n) * (z - xi_n1));
  }
  return 1.0;
}

void add_shift_case(std::vector<Certificate>& out, const QbdTriple& model, const Classification& cls,
                    const PerronData& perron, const SolutionSet& sol, const ShiftCase& c,
                    const SuiteOptions& opt) {
  const ShiftTransform& t = c.transform;
  const std::string tag = std::string(to_string(t.kind)) + ".";
  const QuadMatPoly poly = model.poly();
  const QuadMatPoly sp = t.poly();
  const Eigen::Index n = model.n();

  // Projector and pairing invariants.
  if (t.has_Q()) {
    out.push_back(certify(tag + "pairing_Q", std::abs(t.u_G.dot(t.v) - 1.0), kPairingTolerance));
    out.push_back(certify(tag + "idempotent_Q", diff(*t.Q * *t.Q, *t.Q), opt.identity));
  }
  if (t.has_S()) {
    out.push_back(certify(tag + "pairing_S", std::abs(t.v_R.dot(t.w) - 1.0), kPairingTolerance));
    out.push_back(certify(tag + "idempotent_S", diff(*t.S * *t.S, *t.S), opt.identity));
  }
  if (t.kind == ShiftKind::Double) {
    out.push_back(certify(tag + "a0_forms", t.a_zero_gap, kDoubleFormTolerance * std::max(inf_norm(model.a_zero()), 1.0)));
  }

  // Root surgery.
  try {
    const RootSet shifted_roots = roots(sp);
    const std::vector<Root> expected = expected_shifted_roots(cls.roots, cls, t.kind);
    out.push_back(certify(tag + "root_surgery", root_set_distance(shifted_roots.roots, expected), opt.spectral));
  } catch (const Error& e) {
    out.push_back(certify(tag + "root_surgery", kInf, opt.spectral, e.what()));
  }

  // det B_s(z) = factor(z) det B(z) at eight fixed points.
  {
    const Complex points[8] = {{0.31, 0.52}, {-0.47, 0.18}, {0.83, -0.61}, {1.37, 0.29},
                               {-1.12, -0.74}, {0.05, -0.93}, {2.21, 1.08}, {-0.66, 1.41}};
    double worst = 0.0;
    for (const Complex& z : points) {
      const Complex lhs = det_B(sp, z);
      const Complex rhs = det_factor(t.kind, z, t.xi_n, t.xi_n1) * det_B(poly, z);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    out.push_back(certify(tag + "det_identity", worst, opt.equivalence));
  }

  // Closed-form G_s, R_s, K solve the shifted equations and factor phi_s.
  const ShiftedGR& gr = c.closed_GR;
  out.push_back(certify(tag + "closed_G_equation", residual_G(sp, gr.G), opt.identity));
  out.push_back(certify(tag + "closed_R_equation", residual_R(sp, gr.R), opt.identity));
  out.push_back(certify(tag + "K_unchanged", diff(sp.b_zero + sp.b_plus * gr.G, sol.K), opt.identity));
  out.push_back(factorization_certificate(tag + "factorization_phi", sp, Direction::PlainZ, gr.R, gr.K, gr.G, opt));
  if (t.has_Q()) {
    out.push_back(certify(tag + "G_eigen_replacement",
                          root_set_distance(spectrum(gr.G), replaced_spectrum(sol.G, t.xi_n)), opt.spectral));
  }
  if (t.has_S()) {
    out.push_back(certify(tag + "R_eigen_replacement",
                          root_set_distance(spectrum(gr.R), replaced_spectrum(sol.R, 1.0 / t.xi_n1)),
                          opt.spectral));
  }
  if (cls.kind == Recurrence::NullRecurrent && t.kind == ShiftKind::Double) {
    const double rho = std::max(spectral_radius(gr.G), spectral_radius(gr.R));
    out.push_back(certify(tag + "strict_canonical", rho, 1.0 - opt.equivalence, "max(rho(G_d), rho(R_d))"));
  }

  // Closed-form hat side.
  if (c.closed_hats) {
    const ShiftedHats& h = *c.closed_hats;
    out.push_back(certify(tag + "closed_Ghat_equation", residual_Ghat(sp, h.G_hat), opt.identity));
    out.push_back(certify(tag + "closed_Rhat_equation", residual_Rhat(sp, h.R_hat), opt.identity));
    const Matrix k_def = sp.b_zero + sp.b_minus * h.G_hat;
    out.push_back(certify(tag + "Khat_defining", diff(h.K_hat, k_def), opt.identity));
    out.push_back(certify(tag + "Khat_forms", diff(k_def, Matrix(sp.b_zero + h.R_hat * sp.b_plus)), opt.identity));
    out.push_back(factorization_certificate(tag + "factorization_phi_reversed", sp, Direction::ReversedZ,
                                            h.R_hat, h.K_hat, h.G_hat, opt));
    if (h.K_hat_compact) {
      out.push_back(informational(tag + "Khat_compact_formula", diff(*h.K_hat_compact, k_def),
                                  "compact expression K-hat - u_Rhat v_Ghat^T against the defining relation"));
    }
    if (h.W) {
      const Matrix& w_s = *h.W;
      // w_s is built from W, so its error scales with ||W||.
      const double scale = std::max(1.0, sol.W ? inf_norm(*sol.W) : inf_norm(w_s));
      out.push_back(certify(tag + "W_stein", diff(w_s - gr.G * w_s * gr.R, inverse(sol.K)), opt.identity * scale,
                            "tolerance scaled by max(1, ||W||)"));
      out.push_back(certify(tag + "Ghat_similar_R", root_set_distance(spectrum(h.G_hat), spectrum(gr.R)),
                            opt.spectral));
      out.push_back(certify(tag + "Rhat_similar_G", root_set_distance(spectrum(h.R_hat), spectrum(gr.G)),
                            opt.spectral));
    }
    if (cls.kind == Recurrence::NullRecurrent) {
      const bool g_moves = t.kind != ShiftKind::Right;
      const bool r_moves = t.kind != ShiftKind::Left;
      const std::vector<Root> g_exp = g_moves ? replaced_spectrum(sol.G_hat, 1.0) : spectrum(sol.G_hat);
      const std::vector<Root> r_exp = r_moves ? replaced_spectrum(sol.R_hat, 1.0) : spectrum(sol.R_hat);
      out.push_back(certify(tag + "Ghat_eigen_replacement", root_set_distance(spectrum(h.G_hat), g_exp),
                            opt.spectral));
      out.push_back(certify(tag + "Rhat_eigen_replacement", root_set_distance(spectrum(h.R_hat), r_exp),
                            opt.spectral));
    }
  } else {
    out.push_back(not_applicable(tag + "closed_hats", c.note.empty() ? "no closed form" : c.note));
  }

  // Independent solve of the shifted triple.
  if (c.solved) {
    const SolutionSet& s = *c.solved;
    out.push_back(certify(tag + "solved_G_matches", max_entry_diff(s.G, gr.G), opt.equivalence));
    out.push_back(certify(tag + "solved_R_matches", max_entry_diff(s.R, gr.R), opt.equivalence));
    if (c.closed_hats) {
      out.push_back(certify(tag + "solved_Ghat_matches", max_entry_diff(s.G_hat, c.closed_hats->G_hat),
                            opt.equivalence));
      out.push_back(certify(tag + "solved_Rhat_matches", max_entry_diff(s.R_hat, c.closed_hats->R_hat),
                            opt.equivalence));
    }
    out.push_back(factorization_certificate(tag + "solved_factorization_phi_reversed", sp, Direction::ReversedZ,
                                            s.R_hat, s.K_hat, s.G_hat, opt));
    try {
      const RecoveredGR rec = recover_GR(s.G, s.R, t, poly, kInf);
      const double eq = std::max(rec.residual_G, rec.residual_R);
      if (cls.kind == Recurrence::NullRecurrent) {
        out.push_back(certify(tag + "round_trip", eq, opt.equivalence, "original equations"));
      } else {
        const double d = std::max(max_entry_diff(rec.G, sol.G), max_entry_diff(rec.R, sol.R));
        out.push_back(certify(tag + "round_trip", d, opt.equivalence, "entrywise against the direct solve"));
      }
    } catch (const Error& e) {
      out.push_back(certify(tag + "round_trip", kInf, opt.equivalence, e.what()));
    }
  } else {
    out.push_back(certify(tag + "shifted_solve", kInf, opt.identity, c.note));
  }
  (void)n;
  (void)perron;
}

}  // namespace

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "n/a";
    case Verdict::Informational: return "info";
  }
  return "?";
}

Certificate certify(std::string name, double residual, double tolerance, std::string context) {
  Certificate c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tolerance;
  c.verdict = residual <= tolerance ? Verdict::Pass : Verdict::Fail;
  c.context = std::move(context);
  return c;
}

Certificate not_applicable(std::string name, std::string reason) {
  Certificate c;
  c.name = std::move(name);
  c.verdict = Verdict::NotApplicable;
  c.context = std::move(reason);
  return c;
}

Certificate informational(std::string name, double residual, std::string context) {
  Certificate c;
  c.name = std::move(name);
  c.residual = residual;
  c.verdict = Verdict::Informational;
  c.context = std::move(context);
  return c;
}

std::size_t count_failures(const std::vector<Certificate>& certs) {
  return static_cast<std::size_t>(
      std::count_if(certs.begin(), certs.end(), [](const Certificate& c) { return c.failed(); }));
}

const Certificate* find_certificate(const std::vector<Certificate>& certs, std::string_view name) {
  for (const Certificate& c : certs) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

Certificate check_mmatrix(const Matrix& m, std::string name) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j) worst = std::max(worst, m(i, j));
    }
  }
  try {
    const Matrix inv = inverse(m);
    worst = std::max(worst, -inv.minCoeff() - kMMatrixSlack);
    worst = std::max(worst, 0.0);
  } catch (const SingularMatrixError&) {
    return certify(std::move(name), kInf, 0.0, "singular");
  }
  return certify(std::move(name), worst, 0.0, "worst sign violation");
}

Certificate check_sign_property(const SolutionSet& sol, const PerronData& perron) {
  const PerronData p = perron.has_solution_vectors()
                           ? perron
                           : perron.with_solutions(sol.G, sol.R, sol.G_hat, sol.R_hat);
  const double a = p.v_G.dot(solve_vector(sol.K, p.u_R));
  const double b = p.v_Ghat.dot(solve_vector(sol.K_hat, p.u_Rhat));
  return certify("sign_property", std::max(a, b), -1e-14,
                 "v_G^T K^-1 u_R = " + fmt(a) + ", v_Ghat^T Khat^-1 u_Rhat = " + fmt(b));
}

PhasePartition phase_partition(const SolutionSet& sol, const PerronData& perron) {
  const PerronData p = perron.has_solution_vectors()
                           ? perron
                           : perron.with_solutions(sol.G, sol.R, sol.G_hat, sol.R_hat);
  PhasePartition part;
  part.u = p.u_R;
  part.w = -solve_linear(sol.K, part.u);
  part.v = p.v_G;
  const Eigen::Index n = part.u.size();

  part.s1 = support(part.u, true);
  part.sa = support(part.v, true);
  if (part.s1.empty()) throw VerificationError("phase_partition: s1 is empty");
  if (part.sa.empty()) throw VerificationError("phase_partition: sa is empty");

  const double wu_slack = kSignZeroRelative * std::max(max_abs(part.w), 1e-300);
  if ((part.w - part.u).minCoeff() < -wu_slack) throw VerificationError("phase_partition: w >= u fails");

  const std::vector<int> w_pos = support(part.w, true);
  std::vector<char> u_in(static_cast<std::size_t>(n), 0), w_in(static_cast<std::size_t>(n), 0),
      a_in(static_cast<std::size_t>(n), 0);
  for (int i : part.s1) u_in[static_cast<std::size_t>(i)] = 1;
  for (int i : w_pos) w_in[static_cast<std::size_t>(i)] = 1;
  for (int i : part.sa) a_in[static_cast<std::size_t>(i)] = 1;
  for (int i : part.s1) {
    if (!w_in[static_cast<std::size_t>(i)]) {
      throw VerificationError("phase_partition: w vanishes at phase " + std::to_string(i) + " of s1");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!u_in[k] && w_in[k]) part.s1_tilde.push_back(static_cast<int>(i));
    if (!w_in[k] && !a_in[k]) part.sb_tilde.push_back(static_cast<int>(i));
  }
  check_single_class(sol.R, part.s1, true, "R");
  check_single_class(sol.G, part.sa, false, "G");
  bool meets = false;
  for (int i : part.sa) meets = meets || w_in[static_cast<std::size_t>(i)];
  if (!meets) {
    throw VerificationError("phase_partition: w vanishes on all of sa = " + describe(part.sa) +
                            ", so v^T K^-1 u = 0");
  }
  return part;
}

Certificate check_phase_partition(const SolutionSet& sol, const PerronData& perron) {
  try {
    const PhasePartition p = phase_partition(sol, perron);
    return certify("phase_partition", 0.0, 0.0,
                   "s1=" + describe(p.s1) + " s1~=" + describe(p.s1_tilde) + " sb~=" + describe(p.sb_tilde) +
                       " sa=" + describe(p.sa));
  } catch (const VerificationError& e) {
    return certify("phase_partition", 1.0, 0.0, e.what());
  }
}

std::vector<Root> spectrum(const Matrix& m) {
  std::vector<Root> out;
  for (const Complex& l : eigenvalues(m)) out.push_back(Root{l, false});
  return out;
}

std::vector<Root> expected_shifted_roots(const RootSet& original, const Classification& cls, ShiftKind kind) {
  int a = -1;
  int b = -1;
  std::vector<Root> roots = snap_roots(original.roots, cls, &a, &b);
  if (kind != ShiftKind::Left) roots[static_cast<std::size_t>(a)] = Root{Complex(0.0, 0.0), false};
  if (kind != ShiftKind::Right) {
    if (b < 0) throw VerificationError("expected_shifted_roots: no finite root near xi_{n+1}");
    roots[static_cast<std::size_t>(b)] = Root{Complex(), true};
  }
  return roots;
}

std::vector<Certificate> check_identity_suite(const QbdTriple& model, const Classification& cls,
                                              const PerronData& perron_in, const SolutionSet& sol,
                                              const std::vector<ShiftCase>& cases, const SuiteOptions& opt) {
  const PerronData perron = perron_in.has_solution_vectors()
                                ? perron_in
                                : perron_in.with_solutions(sol.G, sol.R, sol.G_hat, sol.R_hat);
  const QuadMatPoly poly = model.poly();
  std::vector<Certificate> out;

  out.push_back(certify("G_equation", residual_G(poly, sol.G), opt.identity));
  out.push_back(certify("R_equation", residual_R(poly, sol.R), opt.identity));
  out.push_back(certify("Ghat_equation", residual_Ghat(poly, sol.G_hat), opt.identity));
  out.push_back(certify("Rhat_equation", residual_Rhat(poly, sol.R_hat), opt.identity));
  out.push_back(certify("K_forms", diff(poly.b_zero + poly.b_plus * sol.G, poly.b_zero + sol.R * poly.b_minus),
                        opt.identity));
  out.push_back(certify("Khat_forms",
                        diff(poly.b_zero + poly.b_minus * sol.G_hat, poly.b_zero + sol.R_hat * poly.b_plus),
                        opt.identity));
  out.push_back(certify("A1G_equals_RA-1", diff(model.a_plus() * sol.G, sol.R * model.a_minus()), opt.identity));
  out.push_back(certify("A-1Ghat_equals_RhatA1", diff(model.a_minus() * sol.G_hat, sol.R_hat * model.a_plus()),
                        opt.identity));

  const double rho_g = spectral_radius(sol.G);
  const double rho_r = spectral_radius(sol.R);
  const double rho_gh = spectral_radius(sol.G_hat);
  const double rho_rh = spectral_radius(sol.R_hat);
  out.push_back(certify("rho_G_equals_rho_Rhat", std::abs(rho_g - rho_rh), opt.equivalence));
  out.push_back(certify("rho_R_equals_rho_Ghat", std::abs(rho_r - rho_gh), opt.equivalence));
  out.push_back(certify("xi_n_equals_rho_G", std::abs(rho_g - cls.xi_n), opt.equivalence,
                        "xi_n = " + fmt(cls.xi_n)));
  out.push_back(certify("xi_n1_equals_inverse_rho_R", std::abs(rho_r - 1.0 / cls.xi_n1), opt.equivalence,
                        "xi_n1 = " + fmt(cls.xi_n1)));

  {
    std::vector<Root> from_solutions = spectrum(sol.G);
    for (const Root& r : spectrum(sol.R)) {
      from_solutions.push_back(r.value == Complex(0.0, 0.0) ? Root{Complex(), true} : Root{1.0 / r.value, false});
    }
    const std::vector<Root> expected = snap_roots(cls.roots.roots, cls, nullptr, nullptr);
    out.push_back(certify("eigenvalues_match_roots", root_set_distance(from_solutions, expected), opt.spectral));
  }

  if (sol.W) {
    const Matrix& w = *sol.W;
    const Eigen::Index n = model.n();
    const double scale = std::max(1.0, inf_norm(w));
    out.push_back(certify("W_stein", diff(w - sol.G * w * sol.R, inverse(sol.K)), opt.identity * scale,
                          "tolerance scaled by max(1, ||W||)"));
    out.push_back(certify("W_inverse", diff(sol.K * (identity(n) - sol.G * sol.G_hat) * w, identity(n)),
                          opt.identity));
    const HatsFromW h = hats_from_W(w, sol.G, sol.R);
    out.push_back(certify("Ghat_from_W", max_entry_diff(h.G_hat, sol.G_hat), opt.equivalence));
    out.push_back(certify("Rhat_from_W", max_entry_diff(h.R_hat, sol.R_hat), opt.equivalence));
  } else {
    const std::string why = "the Stein series diverges for a null recurrent chain";
    out.push_back(not_applicable("W_stein", why));
    out.push_back(not_applicable("W_inverse", why));
    out.push_back(not_applicable("Ghat_from_W", why));
    out.push_back(not_applicable("Rhat_from_W", why));
  }

  out.push_back(check_mmatrix(-sol.K, "mmatrix_minus_K"));
  out.push_back(check_mmatrix(-sol.K_hat, "mmatrix_minus_Khat"));
  out.push_back(check_sign_property(sol, perron));
  out.push_back(check_phase_partition(sol, perron));

  out.push_back(factorization_certificate("factorization_phi", poly, Direction::PlainZ, sol.R, sol.K, sol.G, opt));
  out.push_back(factorization_certificate("factorization_phi_reversed", poly, Direction::ReversedZ, sol.R_hat,
                                          sol.K_hat, sol.G_hat, opt));

  for (const ShiftCase& c : cases) add_shift_case(out, model, cls, perron, sol, c, opt);
  return out;
}

}  // namespace qbd
