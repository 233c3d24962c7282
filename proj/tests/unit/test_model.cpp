#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "qbdshift/errors.hpp"
#include "qbdshift/generator.hpp"
#include "qbdshift/model.hpp"
#include "support/instances.hpp"

using qbd::Matrix;
using qbd::Recurrence;

namespace {

const Recurrence kClasses[] = {Recurrence::PositiveRecurrent, Recurrence::NullRecurrent, Recurrence::Transient};

Matrix one(double x) { return Matrix::Constant(1, 1, x); }

}  // namespace

TEST(Validate, SpecExamples) {
  EXPECT_NO_THROW(fixture::validated(fixture::P1()));
  EXPECT_NO_THROW(fixture::validated(fixture::N2()));
  try {
    qbd::validate(one(0.5), one(0.6), one(0.3));
    FAIL() << "row sum 1.4 accepted";
  } catch (const qbd::ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("row"), std::string::npos) << e.what();
  }
}

TEST(Validate, RejectsBadInput) {
  EXPECT_THROW(qbd::validate(one(-0.1), one(0.8), one(0.3)), qbd::ValidationError);
  EXPECT_THROW(qbd::validate(one(std::nan("")), one(0.5), one(0.5)), qbd::ValidationError);
  EXPECT_THROW(qbd::validate(Matrix::Zero(2, 2), one(0.5), one(0.5)), qbd::ValidationError);
  EXPECT_THROW(qbd::validate(Matrix(0, 0), Matrix(0, 0), Matrix(0, 0)), qbd::ValidationError);
  // Block diagonal total: phases never communicate.
  EXPECT_THROW(qbd::validate(0.25 * Matrix::Identity(2, 2), 0.5 * Matrix::Identity(2, 2),
                             0.25 * Matrix::Identity(2, 2)),
               qbd::ValidationError);
  // Row sum error just above the tolerance is rejected, just below accepted.
  EXPECT_THROW(qbd::validate(one(0.5), one(0.2), one(0.3 + 1e-11)), qbd::ValidationError);
  EXPECT_NO_THROW(qbd::validate(one(0.5), one(0.2), one(0.3 + 1e-13)));
}

TEST(Validate, WarnsOnExtraUnitModulusRoot) {
  // Level moves every step and the phase flips: det B has roots 1 and -1.
  Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  const auto periodic = qbd::validate(0.4 * flip, Matrix::Zero(2, 2), 0.6 * flip);
  ASSERT_FALSE(periodic.warnings().empty());
  EXPECT_NE(periodic.warnings()[0].find("unit"), std::string::npos) << periodic.warnings()[0];
  EXPECT_TRUE(fixture::validated(fixture::P1()).warnings().empty());
}

TEST(Classify, ScalarExamples) {
  auto c = qbd::classify(fixture::validated(fixture::P1()));
  EXPECT_EQ(c.kind, Recurrence::PositiveRecurrent);
  EXPECT_NEAR(c.drift, -0.2, 1e-15);
  EXPECT_EQ(c.xi_n, 1.0);
  EXPECT_NEAR(c.xi_n1, 5.0 / 3.0, 1e-14);

  c = qbd::classify(fixture::validated(fixture::N1()));
  EXPECT_EQ(c.kind, Recurrence::NullRecurrent);
  EXPECT_EQ(c.drift, 0.0);
  EXPECT_EQ(c.xi_n, 1.0);
  EXPECT_EQ(c.xi_n1, 1.0);

  c = qbd::classify(fixture::validated(fixture::T1()));
  EXPECT_EQ(c.kind, Recurrence::Transient);
  EXPECT_NEAR(c.drift, 0.2, 1e-15);
  EXPECT_NEAR(c.xi_n, 0.6, 1e-14);
  EXPECT_EQ(c.xi_n1, 1.0);
}

TEST(Classify, ReversedSwapsRoles) {
  const auto c = qbd::classify(fixture::validated(fixture::P1()));
  const auto r = c.reversed();
  EXPECT_EQ(r.kind, Recurrence::Transient);
  EXPECT_NEAR(r.drift, 0.2, 1e-15);
  EXPECT_NEAR(r.xi_n, 0.6, 1e-14);
  EXPECT_EQ(r.xi_n1, 1.0);
  const auto direct = qbd::classify(fixture::validated(fixture::P1()).reversed());
  EXPECT_EQ(direct.kind, r.kind);
  EXPECT_NEAR(direct.xi_n, r.xi_n, 1e-12);
}

TEST(Classify, AgreesWithRootSplitting) {
  for (auto kind : kClasses) {
    for (Eigen::Index n : {1, 2, 3, 5, 8}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto model = fixture::validated(fixture::random_triple(kind, n, seed));
        const auto cls = qbd::classify(model);
        ASSERT_EQ(cls.kind, kind) << fixture::class_name(kind) << " n=" << n << " seed=" << seed;
        std::size_t inside = 0;
        for (const auto& r : cls.roots.roots)
          if (!r.infinite && r.modulus() < 1.0 - 1e-6) ++inside;
        const std::size_t expected = kind == Recurrence::Transient ? n : n - 1;
        EXPECT_EQ(inside, expected) << fixture::class_name(kind) << " n=" << n << " seed=" << seed;
        EXPECT_LE(cls.xi_n, 1.0);
        EXPECT_GE(cls.xi_n1, 1.0);
        // xi values are real roots of det B.
        EXPECT_LE(std::abs(qbd::det_B(model.poly(), cls.xi_n)), 1e-9);
        EXPECT_LE(std::abs(qbd::det_B(model.poly(), cls.xi_n1)), 1e-9 * std::pow(cls.xi_n1, 2 * n));
      }
    }
  }
}

TEST(Drift, InvariantUnderPermutation) {
  std::mt19937_64 rng(31);
  for (auto kind : kClasses) {
    const auto t = fixture::random_triple(kind, 5, 2);
    std::vector<int> p = {3, 0, 4, 1, 2};
    Matrix pm = Matrix::Zero(5, 5);
    for (int i = 0; i < 5; ++i) pm(i, p[i]) = 1.0;
    const auto a = fixture::validated(t);
    const auto b = qbd::validate(pm * t.am * pm.transpose(), pm * t.a0 * pm.transpose(), pm * t.ap * pm.transpose());
    EXPECT_NEAR(qbd::drift(a), qbd::drift(b), 1e-14);
    EXPECT_NEAR(qbd::drift(a), fixture::drift(t), 1e-12);
  }
}

TEST(Drift, ZeroForSymmetricFamily) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = fixture::random_triple(Recurrence::NullRecurrent, 1 + seed % 7, seed);
    ASSERT_TRUE(t.am == t.ap);
    EXPECT_LE(std::abs(qbd::drift(fixture::validated(t))), 1e-15);
  }
}

TEST(StationaryVector, SumsToOne) {
  const auto model = fixture::validated(fixture::random_triple(Recurrence::Transient, 6, 4));
  const auto theta = qbd::stationary_vector(model);
  EXPECT_NEAR(theta.sum(), 1.0, 1e-14);
  EXPECT_GT(theta.minCoeff(), 0.0);
  EXPECT_LE((theta.transpose() * model.sum() - theta.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(RecurrenceNames, RoundTrip) {
  for (auto kind : kClasses) EXPECT_EQ(qbd::parse_recurrence(qbd::to_string(kind)), kind);
  EXPECT_EQ(qbd::parse_recurrence("null"), Recurrence::NullRecurrent);
  EXPECT_EQ(qbd::parse_recurrence("positive"), Recurrence::PositiveRecurrent);
  EXPECT_THROW(qbd::parse_recurrence("ergodic"), qbd::ParseError);
}

TEST(PerronData, ScalarAllOnes) {
  for (const auto& t : {fixture::P1(), fixture::N1(), fixture::T1()}) {
    const auto model = fixture::validated(t);
    const auto p = qbd::perron_data(model, qbd::classify(model));
    EXPECT_NEAR(p.u_G(0), 1.0, 1e-15);
    EXPECT_NEAR(p.u_Ghat(0), 1.0, 1e-15);
    EXPECT_NEAR(p.v_R(0), 1.0, 1e-15);
    EXPECT_NEAR(p.v_Rhat(0), 1.0, 1e-15);
    EXPECT_FALSE(p.has_solution_vectors());
  }
}

TEST(PerronData, TwoByTwo) {
  const auto model = fixture::validated(fixture::N2());
  const auto p = qbd::perron_data(model, qbd::classify(model));
  EXPECT_NEAR(p.u_G(0), 1.0, 1e-15);
  EXPECT_NEAR(p.u_G(1), 1.0, 1e-15);
}

TEST(PerronData, EigenvectorsOfAAtXi) {
  for (auto kind : kClasses) {
    const auto model = fixture::validated(fixture::random_triple(kind, 4, 6));
    const auto cls = qbd::classify(model);
    const auto p = qbd::perron_data(model, cls);
    const Matrix an = model.eval_A(cls.xi_n);
    const Matrix an1 = model.eval_A(cls.xi_n1);
    EXPECT_LE((an * p.u_G - cls.xi_n * p.u_G).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((an.transpose() * p.v_Rhat - cls.xi_n * p.v_Rhat).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((an1 * p.u_Ghat - cls.xi_n1 * p.u_Ghat).cwiseAbs().maxCoeff(), 1e-10 * cls.xi_n1 * cls.xi_n1);
    EXPECT_LE((an1.transpose() * p.v_R - cls.xi_n1 * p.v_R).cwiseAbs().maxCoeff(), 1e-10 * cls.xi_n1 * cls.xi_n1);
    EXPECT_GT(p.u_G.minCoeff(), 0.0);
    EXPECT_GT(p.v_R.minCoeff(), 0.0);
  }
}

TEST(PerronData, DegenerateTripleRejected) {
  Matrix up(2, 2);
  up << 0.0, 0.5, 0.5, 0.0;
  const auto model = qbd::validate(Matrix::Zero(2, 2), up, up);
  EXPECT_THROW(qbd::perron_data(model, qbd::classify(model)), qbd::ValidationError);
}

TEST(Generator, SpecExamples) {
  qbd::GenOptions o;
  o.kind = Recurrence::NullRecurrent;
  o.n = 2;
  o.seed = 7;
  auto g = qbd::generate(o);
  EXPECT_TRUE(g.a_minus == g.a_plus);
  auto model = qbd::validate(g.a_minus, g.a_zero, g.a_plus);
  EXPECT_EQ(qbd::classify(model).kind, Recurrence::NullRecurrent);

  o.kind = Recurrence::PositiveRecurrent;
  o.n = 4;
  o.seed = 1;
  g = qbd::generate(o);
  model = qbd::validate(g.a_minus, g.a_zero, g.a_plus);
  EXPECT_LT(qbd::drift(model), 0.0);

  const auto again = qbd::generate(o);
  EXPECT_TRUE(g.a_minus == again.a_minus && g.a_zero == again.a_zero && g.a_plus == again.a_plus);
}

TEST(Generator, ClassesAndTargetDrift) {
  for (auto kind : kClasses) {
    for (Eigen::Index n : {1, 2, 4, 8, 16}) {
      for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        qbd::GenOptions o;
        o.kind = kind;
        o.n = n;
        o.seed = seed;
        const auto g = qbd::generate(o);
        const auto model = qbd::validate(g.a_minus, g.a_zero, g.a_plus);
        EXPECT_EQ(qbd::classify(model).kind, kind);
        EXPECT_GT(g.a_zero.minCoeff(), 0.0);
        if (kind != Recurrence::NullRecurrent) EXPECT_NEAR(qbd::drift(model), g.target_drift, 1e-10);
      }
    }
  }
  qbd::GenOptions o;
  o.kind = Recurrence::PositiveRecurrent;
  o.n = 3;
  o.drift = 1e-3;  // sign is forced by the class
  const auto g = qbd::generate(o);
  EXPECT_NEAR(qbd::drift(qbd::validate(g.a_minus, g.a_zero, g.a_plus)), -1e-3, 1e-12);
}
