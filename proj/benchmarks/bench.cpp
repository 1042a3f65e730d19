#include <benchmark/benchmark.h>

#include <vector>

#include "ratesim/bc.hpp"
#include "ratesim/region.hpp"
#include "ratesim/rng.hpp"
#include "ratesim/suites.hpp"
#include "ratesim/typicality.hpp"

using namespace ratesim;

namespace {

NegSchemeConfig bench_config(double r0, int n) {
  RateTuple r;
  r.r0 = r0;
  r.t2 = r.t3 = 0.125;
  Caps caps;
  caps.max_codebook = std::size_t{1} << 21;
  return two_bit_config(r, n, 0.12, 1, caps);
}

void BM_TypicalityBoundTest(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  // zero rates: singleton codebook, so only the bound test itself is timed
  NegSchemeConfig cfg = two_bit_config({}, n, 0.12, 1);
  DecoderRefs refs = make_decoder_refs(cfg);
  Rng rng(2);
  NegCodebook cb = generate_codebook(cfg, refs, rng);
  std::vector<Symbol> y2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) y2[static_cast<std::size_t>(i)] = i & 1;
  std::vector<std::int32_t> ctx(static_cast<std::size_t>(n));
  std::vector<std::int32_t> scratch(refs.y2_scan.cells());
  const Symbol* prefix[] = {cb.u_row(0), y2.data()};
  refs.y2_scan.bind(prefix, ctx.data());
  for (auto _ : state) {
    benchmark::DoNotOptimize(refs.y2_scan.test_bound(ctx.data(), cb.v2_row(0, 0), scratch.data()));
  }
}
BENCHMARK(BM_TypicalityBoundTest)->Arg(16)->Arg(64)->Arg(256);

void BM_CodebookGeneration(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  NegSchemeConfig cfg = bench_config(0.5, n);
  DecoderRefs refs = make_decoder_refs(cfg);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    NegCodebook cb = generate_codebook(cfg, refs, rng);
    benchmark::DoNotOptimize(cb.x.data());
  }
}
BENCHMARK(BM_CodebookGeneration)->Arg(8)->Arg(16);

void BM_NonuniqueDecode(benchmark::State& state) {
  NegSchemeConfig cfg = bench_config(0.75, 16);
  DecoderRefs refs = make_decoder_refs(cfg);
  Rng rng(3);
  NegCodebook cb = generate_codebook(cfg, refs, rng);
  Msg msg{};
  auto [x, fail] = encode(cb, msg);
  (void)fail;
  std::vector<Symbol> y1, y2, y3;
  transmit(cfg.channel, x, cfg.n, rng, y1, y2, y3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode_yk_nonunique(cb, refs, y2, 2, msg).kind);
  }
}
BENCHMARK(BM_NonuniqueDecode);

void BM_RegionProjection(benchmark::State& state) {
  NegSchemeConfig cfg = bench_config(0.75, 16);
  MIProfile mi = mi_profile(chain_compose(cfg.source, cfg.channel));
  for (auto _ : state) {
    Region2D r = project_region(build_nonunique_system(mi));
    benchmark::DoNotOptimize(r.halfplanes.data());
  }
}
BENCHMARK(BM_RegionProjection);

}  // namespace

BENCHMARK_MAIN();
