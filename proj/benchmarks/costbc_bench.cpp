#include <benchmark/benchmark.h>

#include "costbc/analysis.hpp"
#include "costbc/detection.hpp"
#include "costbc/network.hpp"
#include "costbc/rng.hpp"

using namespace costbc;

static void BM_matmul_4x4(benchmark::State& state) {
  RngStream s(1, 1);
  CMatrix a(4, 4), b(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      a(i, j) = s.next_cn();
      b(i, j) = s.next_cn();
    }
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
}
BENCHMARK(BM_matmul_4x4);

static void BM_sample_cn_1k(benchmark::State& state) {
  RngStream s(1, 2);
  CVector buf;
  for (auto _ : state) {
    s.fill_cn(buf, 1024);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * 1024);
}
BENCHMARK(BM_sample_cn_1k);

static void BM_matched_filter_alamouti(benchmark::State& state) {
  RngStream s(1, 3);
  const OstbcDesign& d = alamouti_design();
  const CVector h = s.sample_cn(2);
  const CVector y = s.sample_cn(2);
  for (auto _ : state) benchmark::DoNotOptimize(matched_filter(d, y, h, 1.0, 1.0));
}
BENCHMARK(BM_matched_filter_alamouti);

static void BM_run_frame(benchmark::State& state, const char* preset) {
  const NetworkConfig cfg = make_preset(preset, 1000.0, AllocationPolicy{});
  const StageConstants consts = calibrate(cfg, 1);
  std::uint64_t frame = 0;
  for (auto _ : state) {
    const FrameTrace trace = run_frame_resampled(cfg, consts, frame++, 1);
    benchmark::DoNotOptimize(per_symbol_detect(trace, cfg.constellation));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_run_frame, two_hop_2x2x1, "2hop_2x2x1");
BENCHMARK_CAPTURE(BM_run_frame, three_hop_2x2x2x1, "3hop_2x2x2x1");
BENCHMARK_CAPTURE(BM_run_frame, mixed_4x2x1, "2hop_4x2x1");

static void BM_outage_point(benchmark::State& state) {
  OutageOptions opts;
  opts.trials = 100000;
  opts.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(outage_sweep({2, 2, 1}, {20.0}, 0.0, opts));
  }
  state.SetItemsProcessed(state.iterations() * opts.trials);
}
BENCHMARK(BM_outage_point);

BENCHMARK_MAIN();
