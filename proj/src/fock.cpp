#include "ladder/fock.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ladder/errors.hpp"

namespace ladder {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
// Bases larger than this cannot be stored or propagated anyway.
constexpr std::uint64_t kMaxDimension = std::uint64_t{1} << 32;

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

// table[s * (n + 1) + p] = number of capped compositions of p into s parts
std::vector<std::uint64_t> composition_table(int particles, int sites, int cap) {
  const std::size_t stride = static_cast<std::size_t>(particles) + 1;
  std::vector<std::uint64_t> table((sites + 1) * stride, 0);
  table[0] = 1;
  for (int s = 1; s <= sites; ++s) {
    for (int p = 0; p <= particles; ++p) {
      std::uint64_t total = 0;
      for (int v = 0; v <= std::min(cap, p); ++v) {
        total = saturating_add(total, table[(s - 1) * stride + (p - v)]);
      }
      table[s * stride + p] = total;
    }
  }
  return table;
}

}  // namespace

std::uint64_t count_capped_compositions(int particles, int sites, int cap) {
  if (particles < 0 || sites < 0 || cap < 0) return 0;
  return composition_table(particles, sites, cap)[static_cast<std::size_t>(sites) * (particles + 1) + particles];
}

FockBasis::FockBasis(LadderGeometry geometry, int particles, int max_occupation)
    : geometry_(geometry), particles_(particles), max_occupation_(max_occupation) {
  if (geometry_.rungs < 1) throw ConfigError("L_s must be at least 1");
  if (particles_ < 0) throw ConfigError("particle number must be non-negative");
  if (max_occupation_ < 1) throw ConfigError("n_max must be at least 1");
  if (max_occupation_ > std::numeric_limits<Occupation>::max()) throw ConfigError("n_max too large");
  const int sites = num_sites();
  if (static_cast<long>(sites) * max_occupation_ < particles_) {
    throw ConfigError("infeasible occupation cap: 2*L_s*n_max = " + std::to_string(sites * max_occupation_) +
                      " < N = " + std::to_string(particles_));
  }

  counts_ = composition_table(particles_, sites, max_occupation_);
  const std::uint64_t dim = count(sites, particles_);
  if (dim >= kMaxDimension) throw ConfigError("basis dimension exceeds 2^32");
  dimension_ = static_cast<std::size_t>(dim);

  occupations_.resize(dimension_ * sites);
  right_counts_.resize(dimension_);

  // Depth-first enumeration, largest occupation first on each site, which
  // yields descending lexicographic order.
  FockState current(sites, 0);
  std::size_t next = 0;
  auto emit = [&] {
    std::copy(current.begin(), current.end(), occupations_.begin() + next * sites);
    int right = 0;
    for (int s = geometry_.rungs; s < sites; ++s) right += current[s];
    right_counts_[next] = right;
    ++next;
  };
  auto fill = [&](auto&& self, int site, int remaining) -> void {
    if (site == sites - 1) {
      current[site] = static_cast<Occupation>(remaining);
      emit();
      return;
    }
    const int rest_capacity = (sites - site - 1) * max_occupation_;
    const int high = std::min(max_occupation_, remaining);
    const int low = std::max(0, remaining - rest_capacity);
    for (int v = high; v >= low; --v) {
      current[site] = static_cast<Occupation>(v);
      self(self, site + 1, remaining - v);
    }
  };
  fill(fill, 0, particles_);
}

std::optional<std::size_t> FockBasis::find(std::span<const Occupation> state) const noexcept {
  const int sites = num_sites();
  if (static_cast<int>(state.size()) != sites) return std::nullopt;
  std::uint64_t rank = 0;
  int remaining = particles_;
  for (int s = 0; s < sites; ++s) {
    const int occ = state[s];
    if (occ > max_occupation_ || occ > remaining) return std::nullopt;
    const int after = sites - s - 1;
    for (int v = std::min(max_occupation_, remaining); v > occ; --v) {
      rank += count(after, remaining - v);
    }
    remaining -= occ;
  }
  if (remaining != 0) return std::nullopt;
  return static_cast<std::size_t>(rank);
}

std::size_t FockBasis::index_of(std::span<const Occupation> state) const {
  if (static_cast<int>(state.size()) != num_sites()) {
    throw DomainError("state has " + std::to_string(state.size()) + " sites, basis has " +
                      std::to_string(num_sites()));
  }
  int total = 0;
  for (const auto occ : state) {
    if (occ > max_occupation_) throw DomainError("site occupation exceeds n_max");
    total += occ;
  }
  if (total != particles_) {
    throw DomainError("state holds " + std::to_string(total) + " particles, basis holds " +
                      std::to_string(particles_));
  }
  return *find(state);
}

std::size_t FockBasis::memory_bytes() const {
  return occupations_.size() * sizeof(Occupation) + right_counts_.size() * sizeof(int) +
         counts_.size() * sizeof(std::uint64_t);
}

}  // namespace ladder
