#include <cstdio>

#include <gtest/gtest.h>

#include "qbdshift/errors.hpp"
#include "qbdshift/model.hpp"
#include "qbdshift/shift.hpp"
#include "qbdshift/solvers.hpp"
#include "qbdshift/verify.hpp"
#include "support/instances.hpp"

using qbd::Matrix;
using qbd::Recurrence;
using qbd::Verdict;

namespace {

const Recurrence kClasses[] = {Recurrence::PositiveRecurrent, Recurrence::NullRecurrent, Recurrence::Transient};

struct Solved {
  qbd::QbdTriple model;
  qbd::Classification cls;
  qbd::PerronData perron;
  qbd::SolutionSet sol;
};

Solved solved(const fixture::Triple& t) {
  auto model = fixture::validated(t);
  auto cls = qbd::classify(model);
  auto perron = qbd::perron_data(model, cls);
  auto sol = qbd::solve(model, cls, perron).solution;
  perron = perron.with_solutions(sol.G, sol.R, sol.G_hat, sol.R_hat);
  return {std::move(model), std::move(cls), std::move(perron), std::move(sol)};
}

std::vector<qbd::Certificate> suite(const Solved& s) {
  const auto cases = qbd::build_shift_cases(s.model, s.cls, s.perron, s.sol);
  return qbd::check_identity_suite(s.model, s.cls, s.perron, s.sol, cases);
}

std::string failures(const std::vector<qbd::Certificate>& certs) {
  std::string out;
  for (const auto& c : certs)
    if (c.failed()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " (%.3e) ", c.residual);
      out += c.name + buf;
    }
  return out;
}

}  // namespace

TEST(Certificate, Verdicts) {
  EXPECT_EQ(qbd::certify("a", 1e-12, 1e-10).verdict, Verdict::Pass);
  EXPECT_EQ(qbd::certify("a", 1e-9, 1e-10).verdict, Verdict::Fail);
  EXPECT_EQ(qbd::certify("a", std::nan(""), 1e-10).verdict, Verdict::Fail);
  EXPECT_EQ(qbd::not_applicable("a", "why").verdict, Verdict::NotApplicable);
  EXPECT_EQ(qbd::informational("a", 3.0).verdict, Verdict::Informational);
  const std::vector<qbd::Certificate> list = {qbd::certify("x", 1.0, 0.0), qbd::certify("y", 0.0, 0.0)};
  EXPECT_EQ(qbd::count_failures(list), 1u);
  ASSERT_NE(qbd::find_certificate(list, "y"), nullptr);
  EXPECT_EQ(qbd::find_certificate(list, "z"), nullptr);
}

TEST(MMatrix, SpecExamples) {
  EXPECT_FALSE(qbd::check_mmatrix(Matrix::Constant(1, 1, 0.5)).failed());
  Matrix bad(2, 2);
  bad << 1, -2, -2, 1;
  EXPECT_TRUE(qbd::check_mmatrix(bad).failed());
  EXPECT_FALSE(qbd::check_mmatrix(Matrix::Identity(3, 3)).failed());
  Matrix positive_offdiag(2, 2);
  positive_offdiag << 1, 0.1, 0, 1;
  EXPECT_TRUE(qbd::check_mmatrix(positive_offdiag).failed());
}

TEST(SignProperty, ScalarExamples) {
  auto s = solved(fixture::P1());
  auto c = qbd::check_sign_property(s.sol, s.perron);
  EXPECT_FALSE(c.failed());
  EXPECT_NEAR(c.residual, -2.0, 1e-12);
  s = solved(fixture::N1());
  c = qbd::check_sign_property(s.sol, s.perron);
  EXPECT_FALSE(c.failed());
  EXPECT_NEAR(c.residual, -2.5, 1e-12);
}

TEST(SignProperty, RandomInstances) {
  for (auto kind : kClasses) {
    for (Eigen::Index n : {1, 2, 4, 8}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = solved(fixture::random_triple(kind, n, seed));
        const auto c = qbd::check_sign_property(s.sol, s.perron);
        EXPECT_FALSE(c.failed()) << c.context;
        EXPECT_FALSE(qbd::check_phase_partition(s.sol, s.perron).failed());
      }
    }
  }
}

TEST(PhasePartition, Scalar) {
  const auto s = solved(fixture::P1());
  const auto p = qbd::phase_partition(s.sol, s.perron);
  EXPECT_EQ(p.s1, std::vector<int>{0});
  EXPECT_EQ(p.sa, std::vector<int>{0});
  EXPECT_TRUE(p.s1_tilde.empty());
  EXPECT_TRUE(p.sb_tilde.empty());
}

TEST(PhasePartition, E2) {
  fixture::Triple t{Matrix(2, 2), Matrix(2, 2), Matrix(2, 2)};
  t.am << 0.30, 0.10, 0.15, 0.25;
  t.a0 << 0.10, 0.20, 0.20, 0.10;
  t.ap << 0.20, 0.10, 0.10, 0.20;
  const auto s = solved(t);
  const auto p = qbd::phase_partition(s.sol, s.perron);
  EXPECT_FALSE(p.s1.empty());
  EXPECT_FALSE(p.sa.empty());
  EXPECT_FALSE(qbd::check_phase_partition(s.sol, s.perron).failed());
}

// Phase 2 can never move up a level (zero row of A_1), so R has a zero row
// and u_R vanishes there while w = -K^{-1} u_R does not.
TEST(PhasePartition, TransientPhaseClass) {
  fixture::Triple t{Matrix(3, 3), Matrix(3, 3), Matrix(3, 3)};
  t.am << 0.10, 0.10, 0.05, 0.10, 0.05, 0.05, 0.20, 0.20, 0.20;
  t.a0 << 0.10, 0.15, 0.10, 0.15, 0.10, 0.15, 0.10, 0.20, 0.10;
  t.ap << 0.15, 0.10, 0.15, 0.10, 0.20, 0.10, 0.00, 0.00, 0.00;
  for (const auto* blocks : {&t}) {
    const auto s = solved(*blocks);
    EXPECT_EQ(s.sol.R.row(2).cwiseAbs().maxCoeff(), 0.0);
    const auto p = qbd::phase_partition(s.sol, s.perron);
    EXPECT_EQ(p.s1, (std::vector<int>{0, 1}));
    EXPECT_EQ(p.s1_tilde, std::vector<int>{2});
    EXPECT_TRUE(p.sb_tilde.empty());
    EXPECT_FALSE(p.sa.empty());
    // Reachability: the class of R has no incoming edge from phase 2.
    EXPECT_EQ(s.sol.R(2, 0) + s.sol.R(2, 1), 0.0);
    EXPECT_FALSE(qbd::check_phase_partition(s.sol, s.perron).failed());
  }
}

TEST(PhasePartition, ViolationIsReported) {
  auto s = solved(fixture::P1());
  s.sol.K = -s.sol.K;  // flips the sign of w
  EXPECT_THROW(qbd::phase_partition(s.sol, s.perron), qbd::VerificationError);
  EXPECT_TRUE(qbd::check_phase_partition(s.sol, s.perron).failed());
}

TEST(IdentitySuite, P1AllPass) {
  const auto certs = suite(solved(fixture::P1()));
  EXPECT_EQ(qbd::count_failures(certs), 0u) << failures(certs);
  for (const auto& c : certs) {
    if (c.verdict == Verdict::Pass && c.tolerance >= 1e-10 && c.tolerance <= 1e-7) EXPECT_LE(c.residual, 1e-10) << c.name;
  }
  EXPECT_EQ(qbd::find_certificate(certs, "W_stein")->verdict, Verdict::Pass);
}

TEST(IdentitySuite, N1OnlyCompactFormulaIsInformational) {
  const auto certs = suite(solved(fixture::N1()));
  EXPECT_EQ(qbd::count_failures(certs), 0u) << failures(certs);
  std::vector<std::string> info;
  for (const auto& c : certs)
    if (c.verdict == Verdict::Informational) info.push_back(c.name);
  EXPECT_EQ(info, std::vector<std::string>{"double.Khat_compact_formula"});
  EXPECT_NEAR(qbd::find_certificate(certs, "double.Khat_compact_formula")->residual, 0.4, 1e-12);
  EXPECT_EQ(qbd::find_certificate(certs, "W_stein")->verdict, Verdict::NotApplicable);
}

TEST(IdentitySuite, CorruptedGFails) {
  auto s = solved(fixture::random_triple(Recurrence::PositiveRecurrent, 3, 5));
  s.sol.G.array() += 0.01;
  const auto certs = suite(s);
  EXPECT_GE(qbd::count_failures(certs), 3u);
}

TEST(IdentitySuite, RandomInstancesPassAndAreDeterministic) {
  for (auto kind : kClasses) {
    for (Eigen::Index n : {2, 4}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto s = solved(fixture::random_triple(kind, n, seed));
        const auto a = suite(s);
        EXPECT_EQ(qbd::count_failures(a), 0u) << fixture::class_name(kind) << " n=" << n << " seed=" << seed << ": "
                                              << failures(a);
        const auto b = suite(s);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
          EXPECT_EQ(a[i].name, b[i].name);
          EXPECT_EQ(a[i].residual, b[i].residual) << a[i].name;
        }
      }
    }
  }
}

TEST(IdentitySuite, FactorizationStrengthMatchesRadii) {
  auto strict = [](const Matrix& left, const Matrix& right) {
    return qbd::spectral_radius(left) < 1.0 - 1e-8 && qbd::spectral_radius(right) < 1.0 - 1e-8;
  };
  for (auto kind : kClasses) {
    const auto s = solved(fixture::random_triple(kind, 3, 2));
    const auto plain = qbd::Factorization::make(qbd::Direction::PlainZ, s.sol.R, s.sol.K, s.sol.G);
    // The root at one always sits on the circle, so the original is weak.
    EXPECT_EQ(plain.strength, qbd::Strength::WeakCanonical);
    EXPECT_FALSE(strict(s.sol.R, s.sol.G));
    const auto cases = qbd::build_shift_cases(s.model, s.cls, s.perron, s.sol);
    for (const auto& c : cases) {
      const auto f = qbd::Factorization::make(qbd::Direction::PlainZ, c.closed_GR.R, c.closed_GR.K, c.closed_GR.G);
      EXPECT_EQ(f.strength == qbd::Strength::Canonical, strict(c.closed_GR.R, c.closed_GR.G))
          << fixture::class_name(kind) << " " << qbd::to_string(c.transform.kind);
    }
    // The double shift removes both unit-circle roots of a null chain.
    if (kind == Recurrence::NullRecurrent) {
      EXPECT_TRUE(strict(cases[2].closed_GR.R, cases[2].closed_GR.G));
    }
  }
}

TEST(ExpectedShiftedRoots, Replacement) {
  const auto s = solved(fixture::P1());
  auto r = qbd::expected_shifted_roots(s.cls.roots, s.cls, qbd::ShiftKind::Right);
  ASSERT_EQ(r.size(), 2u);
  r = qbd::sorted_root_set(r).roots;
  EXPECT_EQ(std::abs(r[0].value), 0.0);
  EXPECT_NEAR(r[1].value.real(), 5.0 / 3.0, 1e-12);
  r = qbd::sorted_root_set(qbd::expected_shifted_roots(s.cls.roots, s.cls, qbd::ShiftKind::Double)).roots;
  EXPECT_EQ(std::abs(r[0].value), 0.0);
  EXPECT_TRUE(r[1].infinite);
}
