#include "binviz/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace binviz {

void EntropyParams::validate() const {
  if (window < 1) throw BadConfig("window must be >= 1");
  if (block < 1) throw BadConfig("block size must be >= 1");
  if (stride < 1) throw BadConfig("stride must be >= 1");
  if (mode == EntropyMode::sliding && stride > window)
    throw BadConfig("stride must not exceed the window in sliding mode");
}

namespace {

inline double entropy_term(std::uint32_t count, double n) {
  const double p = static_cast<double>(count) / n;
  return p * std::log2(p);
}

}  // namespace

double entropy_from_histogram(const std::array<std::uint32_t, 256>& hist, std::size_t total) {
  const double n = static_cast<double>(total);

  // Profiles evaluate millions of windows of one size; memoize the per-count
  // term for the current total. The cached values come from the identical
  // expression, so results stay bit-for-bit equal to direct evaluation.
  thread_local std::vector<double> cache;
  thread_local std::size_t cached_total = 0;
  const bool use_cache = total >= 2 && total <= 4096;
  if (use_cache && cached_total != total) {
    cache.resize(total + 1);
    for (std::size_t c = 1; c <= total; ++c)
      cache[c] = entropy_term(static_cast<std::uint32_t>(c), n);
    cached_total = total;
  }

  double h = 0.0;
  for (int i = 0; i < 256; ++i) {
    if (hist[i] == 0) continue;
    h -= use_cache ? cache[hist[i]] : entropy_term(hist[i], n);
  }
  // -0.0 from a single-symbol histogram
  return h == 0.0 ? 0.0 : h;
}

double shannon_entropy(std::span<const std::uint8_t> block) {
  if (block.empty()) throw EmptyBlock();
  std::array<std::uint32_t, 256> hist{};
  for (const std::uint8_t b : block) ++hist[b];
  return entropy_from_histogram(hist, block.size());
}

namespace {

EntropyProfile block_profile(const ByteStream& stream, const EntropyParams& params) {
  const std::size_t n = stream.length();
  EntropyProfile profile{std::vector<double>(n, 0.0), params};
  for (std::size_t start = 0; start < n; start += params.block) {
    const std::size_t end = std::min(n, start + params.block);
    const double value =
        shannon_entropy({stream.bytes.data() + start, end - start}) / 8.0;
    std::fill(profile.values.begin() + static_cast<std::ptrdiff_t>(start),
              profile.values.begin() + static_cast<std::ptrdiff_t>(end), value);
  }
  return profile;
}

EntropyProfile sliding_profile(const ByteStream& stream, const EntropyParams& params) {
  const std::size_t n = stream.length();
  EntropyProfile profile{std::vector<double>(n, 0.0), params};

  std::array<std::uint32_t, 256> hist{};
  std::size_t cur_lo = 0, cur_hi = 0;
  for (std::size_t center = 0; center < n; center += params.stride) {
    const auto [lo, hi] = sliding_window_bounds(center, params.window, n);
    while (cur_hi < hi) ++hist[stream.bytes[cur_hi++]];
    while (cur_lo < lo) --hist[stream.bytes[cur_lo++]];
    const double value = entropy_from_histogram(hist, hi - lo) / 8.0;
    const std::size_t run_end = std::min(n, center + params.stride);
    std::fill(profile.values.begin() + static_cast<std::ptrdiff_t>(center),
              profile.values.begin() + static_cast<std::ptrdiff_t>(run_end), value);
  }
  return profile;
}

}  // namespace

EntropyProfile entropy_profile(const ByteStream& stream, const EntropyParams& params) {
  params.validate();
  if (stream.length() == 0) throw EmptyStream();
  return params.mode == EntropyMode::block ? block_profile(stream, params)
                                           : sliding_profile(stream, params);
}

}  // namespace binviz
