#include <benchmark/benchmark.h>

#include "mastergeo/mastergeo.hpp"

using namespace mastergeo;

namespace {

StateSpace random_model(std::size_t states, std::size_t observables) {
    Rng rng(11);
    Matrix o(static_cast<Eigen::Index>(observables), static_cast<Eigen::Index>(states));
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < states; ++j) labels.push_back("s" + std::to_string(j));
    for (Eigen::Index a = 0; a < o.rows(); ++a)
        for (Eigen::Index j = 0; j < o.cols(); ++j) o(a, j) = rng.uniform(-1.0, 1.0);
    return StateSpace(labels, o);
}

void BM_ThetaOfEta(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const StateSpace m = random_model(4 * n, n);
    const EtaPoint et = eta_of_theta(m, ThetaPoint(Vector::Constant(static_cast<Eigen::Index>(n), 0.7)));
    for (auto _ : state) benchmark::DoNotOptimize(theta_of_eta(m, et));
}
BENCHMARK(BM_ThetaOfEta)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_CubicForm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const StateSpace m = random_model(4 * n, n);
    const ThetaPoint th(Vector::Constant(static_cast<Eigen::Index>(n), 0.3));
    for (auto _ : state) benchmark::DoNotOptimize(cubic_form(m, th));
}
BENCHMARK(BM_CubicForm)->Arg(1)->Arg(4)->Arg(8);

void BM_IntegratePrimaryMaster(benchmark::State& state) {
    const auto states = static_cast<std::size_t>(state.range(0));
    const StateSpace m = random_model(states, 2);
    const ThetaPoint th{0.5, -0.5};
    Rng rng(3);
    const Distribution p0 = sample_simplex(rng, states);
    for (auto _ : state) benchmark::DoNotOptimize(integrate(primary_field(m, th), p0, 10.0, 1e-3));
}
BENCHMARK(BM_IntegratePrimaryMaster)->Arg(2)->Arg(16)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_CurveLength(benchmark::State& state) {
    const Potential w = psi_potential(random_model(8, 2));
    const ContactPoint p0{(Vector(2) << 0.4, -0.2).finished(), (Vector(2) << 1.0, 0.5).finished(), 0.3};
    for (auto _ : state) benchmark::DoNotOptimize(curve_length(w, p0, 1.0));
}
BENCHMARK(BM_CurveLength)->Unit(benchmark::kMicrosecond);

void BM_FlowExact(benchmark::State& state) {
    const Potential w = psi_potential(random_model(8, 2));
    const ContactPoint p0{(Vector(2) << 0.4, -0.2).finished(), (Vector(2) << 1.0, 0.5).finished(), 0.3};
    for (auto _ : state) benchmark::DoNotOptimize(flow_exact(w, p0, 2.0));
}
BENCHMARK(BM_FlowExact);

}  // namespace

BENCHMARK_MAIN();
