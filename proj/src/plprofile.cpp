#include "plprofile.hpp"

#include <algorithm>

namespace swancond {

PLProfile PLProfile::constant(Rat r_end, Rat value) {
    PLProfile p;
    p.breaks_ = {Rat(0), std::move(r_end)};
    p.values_ = {value, value};
    if (p.breaks_[1] <= 0)
        throw_error(ErrorKind::Schema, "profile needs a positive right endpoint");
    return p;
}

PLProfile PLProfile::from_points(std::vector<Rat> breaks, std::vector<Rat> values) {
    if (breaks.size() != values.size() || breaks.size() < 2)
        throw_error(ErrorKind::Schema, "profile needs matching breakpoint and value lists");
    if (breaks.front() != 0)
        throw_error(ErrorKind::Schema, "profile breakpoints must start at 0");
    for (std::size_t i = 1; i < breaks.size(); ++i)
        if (breaks[i] <= breaks[i - 1])
            throw_error(ErrorKind::Schema, "profile breakpoints must increase");
    PLProfile p;
    p.breaks_ = std::move(breaks);
    p.values_ = std::move(values);
    p.drop_redundant_breaks();
    return p;
}

void PLProfile::drop_redundant_breaks() {
    std::vector<Rat> nb{breaks_.front()}, nv{values_.front()};
    for (std::size_t i = 1; i + 1 < breaks_.size(); ++i) {
        Rat left = (values_[i] - nv.back()) / (breaks_[i] - nb.back());
        Rat right = (values_[i + 1] - values_[i]) / (breaks_[i + 1] - breaks_[i]);
        if (left != right) {
            nb.push_back(breaks_[i]);
            nv.push_back(values_[i]);
        }
    }
    nb.push_back(breaks_.back());
    nv.push_back(values_.back());
    breaks_ = std::move(nb);
    values_ = std::move(nv);
}

Rat PLProfile::segment_slope(std::size_t i) const {
    return (values_[i + 1] - values_[i]) / (breaks_[i + 1] - breaks_[i]);
}

Rat PLProfile::value_at(const Rat& r) const {
    if (r < 0 || r > r_end())
        throw_error(ErrorKind::DomainMismatch, "radius outside the profile domain");
    for (std::size_t i = 1; i < breaks_.size(); ++i) {
        if (r <= breaks_[i]) {
            Rat t = r - breaks_[i - 1];
            return values_[i - 1] + segment_slope(i - 1) * t;
        }
    }
    return values_.back();
}

Rat PLProfile::left_slope_at(const Rat& r) const {
    if (r <= 0 || r > r_end())
        throw_error(ErrorKind::DomainMismatch, "radius outside the profile domain");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (r <= breaks_[i]) return segment_slope(i - 1);
    return segment_slope(segment_count() - 1);
}

Rat PLProfile::right_slope_at(const Rat& r) const {
    if (r < 0 || r >= r_end())
        throw_error(ErrorKind::DomainMismatch, "radius outside the profile domain");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (r < breaks_[i]) return segment_slope(i - 1);
    return segment_slope(segment_count() - 1);
}

std::vector<Rat> PLProfile::kinks() const {
    std::vector<Rat> out;
    for (std::size_t i = 1; i + 1 < breaks_.size(); ++i)
        if (segment_slope(i - 1) != segment_slope(i)) out.push_back(breaks_[i]);
    return out;
}

bool PLProfile::nonnegative() const {
    return std::all_of(values_.begin(), values_.end(), [](const Rat& v) { return v >= 0; });
}

PLProfile PLProfile::operator+(const PLProfile& o) const {
    if (r_end() != o.r_end())
        throw_error(ErrorKind::DomainMismatch, "profiles live on different domains");
    std::vector<Rat> merged;
    std::merge(breaks_.begin(), breaks_.end(), o.breaks_.begin(), o.breaks_.end(),
               std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    std::vector<Rat> values;
    values.reserve(merged.size());
    for (const Rat& b : merged) values.push_back(value_at(b) + o.value_at(b));
    return from_points(std::move(merged), std::move(values));
}

PLProfile PLProfile::scale(const Rat& c) const {
    PLProfile p = *this;
    for (Rat& v : p.values_) v *= c;
    p.drop_redundant_breaks();
    return p;
}

bool PLProfile::operator==(const PLProfile& o) const {
    return breaks_ == o.breaks_ && values_ == o.values_;
}

Rat PLProfile::largest_radius_with_left_slope_below(const Rat& m) const {
    // slopes are scanned from the right; the left slope on segment i covers
    // the half-open interval (b_i, b_{i+1}]
    for (std::size_t i = segment_count(); i-- > 0;) {
        if (segment_slope(i) < m) return breaks_[i + 1];
    }
    return Rat(0);
}

}  // namespace swancond
