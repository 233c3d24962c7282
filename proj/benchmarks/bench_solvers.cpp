#include <benchmark/benchmark.h>

#include "qbdshift/generator.hpp"
#include "qbdshift/kernel.hpp"
#include "qbdshift/matpoly.hpp"
#include "qbdshift/model.hpp"
#include "qbdshift/shift.hpp"
#include "qbdshift/solvers.hpp"

namespace {

struct Instance {
  qbd::QbdTriple model;
  qbd::Classification cls;
  qbd::PerronData perron;
};

Instance make(qbd::Recurrence kind, Eigen::Index n) {
  qbd::GenOptions opt;
  opt.kind = kind;
  opt.n = n;
  opt.seed = 11;
  const qbd::GeneratedModel g = qbd::generate(opt);
  qbd::QbdTriple model = qbd::validate(g.a_minus, g.a_zero, g.a_plus);
  qbd::Classification cls = qbd::classify(model);
  qbd::PerronData perron = qbd::perron_data(model, cls);
  return {std::move(model), std::move(cls), std::move(perron)};
}

void BM_CyclicReductionDirect(benchmark::State& state) {
  const Instance inst = make(qbd::Recurrence::NullRecurrent, state.range(0));
  qbd::CrOptions cr;
  cr.tol = 1e-8;
  cr.require_convergence = false;
  const qbd::QuadMatPoly poly = inst.model.poly();
  for (auto _ : state) benchmark::DoNotOptimize(qbd::solve_min_G(poly, cr));
}
BENCHMARK(BM_CyclicReductionDirect)->Arg(4)->Arg(16)->Arg(64);

void BM_CyclicReductionDoubleShift(benchmark::State& state) {
  const Instance inst = make(qbd::Recurrence::NullRecurrent, state.range(0));
  const qbd::FreeVectors fv = qbd::a_priori_vectors(inst.perron);
  for (auto _ : state) {
    const qbd::ShiftTransform t =
        qbd::build_shift(qbd::ShiftKind::Double, inst.model, inst.cls, inst.perron, fv.v, fv.w);
    benchmark::DoNotOptimize(qbd::solve_min_G(t.poly()));
  }
}
BENCHMARK(BM_CyclicReductionDoubleShift)->Arg(4)->Arg(16)->Arg(64);

void BM_SolveAuto(benchmark::State& state) {
  const Instance inst = make(qbd::Recurrence::PositiveRecurrent, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(qbd::solve(inst.model, inst.cls, inst.perron));
}
BENCHMARK(BM_SolveAuto)->Arg(4)->Arg(16)->Arg(64);

void BM_Stein(benchmark::State& state) {
  const Instance inst = make(qbd::Recurrence::PositiveRecurrent, state.range(0));
  const qbd::SolutionSet sol = qbd::solve_direct(inst.model.poly());
  const qbd::Matrix c = qbd::inverse(sol.K);
  for (auto _ : state) benchmark::DoNotOptimize(qbd::stein_solve(sol.G, sol.R, c));
}
BENCHMARK(BM_Stein)->Arg(4)->Arg(16)->Arg(64);

void BM_Roots(benchmark::State& state) {
  const Instance inst = make(qbd::Recurrence::PositiveRecurrent, state.range(0));
  const qbd::QuadMatPoly poly = inst.model.poly();
  for (auto _ : state) benchmark::DoNotOptimize(qbd::roots(poly));
}
BENCHMARK(BM_Roots)->Arg(4)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
