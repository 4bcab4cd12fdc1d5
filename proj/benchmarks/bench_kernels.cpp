// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "mplite/ehr/synth.hpp"
#include "mplite/metrics/metrics.hpp"
#include "mplite/nn/dense.hpp"
#include "mplite/nn/gru.hpp"
#include "mplite/nn/rng.hpp"

namespace {

using mplite::nn::Rng;
using mplite::nn::Vector;

Vector random_vector(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
  return v;
}

void BM_DenseForwardBackward(benchmark::State& state) {
  Rng rng(1);
  const auto in = static_cast<std::size_t>(state.range(0));
  const auto out = static_cast<std::size_t>(state.range(1));
  auto layer = mplite::nn::make_dense(in, out, mplite::nn::Activation::relu, rng);
  auto grads = mplite::nn::zeros_like(layer);
  const Vector x = random_vector(rng, static_cast<Eigen::Index>(in));
  const Vector d = random_vector(rng, static_cast<Eigen::Index>(out));
  for (auto _ : state) {
    const auto f = mplite::nn::dense_forward(layer, x);
    benchmark::DoNotOptimize(mplite::nn::dense_backward_accumulate(layer, f.cache, d, grads));
  }
}
BENCHMARK(BM_DenseForwardBackward)->Args({50, 200})->Args({200, 40})->Args({697, 200});

void BM_GruForwardBackward(benchmark::State& state) {
  Rng rng(2);
  const auto steps = static_cast<std::size_t>(state.range(0));
  auto gru = mplite::nn::make_gru(40, 128, rng);
  auto grads = mplite::nn::zeros_like(gru);
  std::vector<Vector> xs;
  for (std::size_t t = 0; t < steps; ++t) xs.push_back(random_vector(rng, 40));
  const Vector h0 = Vector::Zero(128);
  const Vector d = random_vector(rng, 128);
  for (auto _ : state) {
    const auto f = mplite::nn::gru_forward(gru, xs, h0);
    mplite::nn::gru_backward_accumulate(gru, f.cache, d, grads);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_GruForwardBackward)->Arg(1)->Arg(3)->Arg(8);

void BM_RocAuc(benchmark::State& state) {
  Rng rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> scores(n);
  std::vector<std::uint8_t> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = rng.uniform();
    labels[i] = static_cast<std::uint8_t>(i % 2);
  }
  for (auto _ : state) benchmark::DoNotOptimize(mplite::metrics::roc_auc(scores, labels));
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000);

void BM_SynthGenerate(benchmark::State& state) {
  mplite::ehr::GenConfig config;
  config.n_patients = static_cast<std::size_t>(state.range(0));
  config.lab_flip_rate = 0.1;
  config.persistence = 0.7;
  for (auto _ : state) benchmark::DoNotOptimize(mplite::ehr::synth_generate(config, 7));
}
BENCHMARK(BM_SynthGenerate)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
