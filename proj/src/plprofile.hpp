#ifndef SWANCOND_PLPROFILE_HPP
#define SWANCOND_PLPROFILE_HPP

#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace swancond {

// Continuous piecewise-linear function on (0, r_end], stored as breakpoints
// 0 = b_0 < b_1 < ... < b_n = r_end with values at each (the value at 0 is
// the continuity limit).  All data exact rationals.
class PLProfile {
  public:
    PLProfile() = default;
    static PLProfile constant(Rat r_end, Rat value);
    static PLProfile from_points(std::vector<Rat> breaks, std::vector<Rat> values);

    const Rat& r_end() const { return breaks_.back(); }
    const std::vector<Rat>& breaks() const { return breaks_; }
    const std::vector<Rat>& values() const { return values_; }
    std::size_t segment_count() const { return breaks_.size() - 1; }
    Rat segment_slope(std::size_t i) const;

    Rat value_at(const Rat& r) const;       // r in [0, r_end]
    Rat left_slope_at(const Rat& r) const;  // r in (0, r_end]
    Rat right_slope_at(const Rat& r) const; // r in [0, r_end)

    // Interior breakpoints where the slope changes.
    std::vector<Rat> kinks() const;

    bool nonnegative() const;

    PLProfile operator+(const PLProfile& o) const;  // DomainMismatch on r_end
    PLProfile scale(const Rat& c) const;
    bool operator==(const PLProfile& o) const;
    bool operator!=(const PLProfile& o) const { return !(*this == o); }

    // Largest r in (0, r_end] whose left slope is strictly below m, else 0.
    Rat largest_radius_with_left_slope_below(const Rat& m) const;

  private:
    void drop_redundant_breaks();
    std::vector<Rat> breaks_, values_;
};

}  // namespace swancond

#endif
