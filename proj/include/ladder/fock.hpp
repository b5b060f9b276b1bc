#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ladder {

enum class Leg : int { Left = 0, Right = 1 };

// Two legs of `rungs` sites each. Sites are flattened leg-major:
// all left-leg sites first (rung 0..L_s-1), then all right-leg sites.
struct LadderGeometry {
  int rungs = 1;

  int num_sites() const { return 2 * rungs; }
  int site(Leg leg, int rung) const { return static_cast<int>(leg) * rungs + rung; }
  Leg leg_of(int site) const { return site < rungs ? Leg::Left : Leg::Right; }
  int rung_of(int site) const { return site % rungs; }
};

using Occupation = std::uint8_t;
using FockState = std::vector<Occupation>;

// Number of ways to place `particles` bosons on `sites` sites with at most
// `cap` per site.
std::uint64_t count_capped_compositions(int particles, int sites, int cap);

// Fixed-N bosonic Fock basis with a per-site occupation cap.
//
// States are stored in descending lexicographic order of the occupation
// vector, so ordinal 0 is the state with min(N, cap) bosons on site 0 and the
// remainder packed as far left as possible. Lookup uses the combinatorial
// rank of the occupation vector (a perfect hash), O(sites * cap).
class FockBasis {
 public:
  FockBasis(LadderGeometry geometry, int particles, int max_occupation);

  const LadderGeometry& geometry() const { return geometry_; }
  int particles() const { return particles_; }
  int max_occupation() const { return max_occupation_; }
  int num_sites() const { return geometry_.num_sites(); }
  std::size_t dimension() const { return dimension_; }

  std::span<const Occupation> state(std::size_t index) const {
    return {occupations_.data() + index * num_sites(), static_cast<std::size_t>(num_sites())};
  }

  // Throws DomainError if `state` has the wrong length, particle number, or
  // exceeds the cap.
  std::size_t index_of(std::span<const Occupation> state) const;

  // Rank without validation beyond the cap; returns nullopt for states
  // outside the basis.
  std::optional<std::size_t> find(std::span<const Occupation> state) const noexcept;

  // Particles on the right leg for basis state `index`.
  int right_count(std::size_t index) const { return right_counts_[index]; }

  // Bytes held by the basis tables.
  std::size_t memory_bytes() const;

 private:
  std::uint64_t count(int sites, int particles) const {
    return counts_[static_cast<std::size_t>(sites) * (particles_ + 1) + particles];
  }

  LadderGeometry geometry_;
  int particles_;
  int max_occupation_;
  std::size_t dimension_ = 0;
  std::vector<std::uint64_t> counts_;  // [sites][particles]
  std::vector<Occupation> occupations_;
  std::vector<int> right_counts_;
};

}  // namespace ladder
