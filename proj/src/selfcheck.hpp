#ifndef SWANCOND_SELFCHECK_HPP
#define SWANCOND_SELFCHECK_HPP

#include <random>
#include <string>
#include <vector>

#include "families.hpp"

namespace swancond {

// Deterministic generator for small random covers (shared by the selfcheck
// command and the acceptance suite).
struct CoverGenOptions {
    std::vector<unsigned long> primes{2, 3, 5};
    long max_branch = 4;
    bool allow_unit_part = true;
    bool allow_alpha0 = true;
};
CoverSpec random_cover(std::mt19937_64& rng, const CoverGenOptions& gen);
CoverSpec random_cover_in(std::mt19937_64& rng, const CoverGenOptions& gen, FieldCtxPtr W);

// Sample radii k/e * r0 for k = 1..e.
std::vector<Rat> sample_radii(const CoverSpec& cover);

struct SelfCheckOptions {
    unsigned long seed = 0x5eedc0de;
    long covers = 60;
    long pairs = 30;
    long eliminations = 25;
    long count_vectors = 300;
    long threads = 1;
    AnalysisOptions analysis;
};

struct SelfCheckReport {
    bool ok = true;
    long covers_checked = 0;
    long radii_checked = 0;
    long pairs_checked = 0;
    long eliminations_checked = 0;
    long vectors_checked = 0;
    std::vector<std::string> failures;
};

// Invariant suites: slope/ord duality, universal slope bound, divisibility
// guard, degree identity, vanishing-cycles consistency, additivity and twist
// invariance, elimination guard and solution independence, tower calculus
// identities, and the worked instance.
SelfCheckReport run_selfcheck(const SelfCheckOptions& opts);

// Individual suites, reused by the acceptance tests with their own counts.
void check_cover_invariants(const CoverSpec& cover, const AnalysisOptions& opts,
                            long* radii_checked, std::vector<std::string>& failures);
void check_pair_invariants(const CoverSpec& a, const CoverSpec& b,
                           const AnalysisOptions& opts, std::vector<std::string>& failures);
void check_elimination_invariants(std::mt19937_64& rng, unsigned long p,
                                  std::vector<std::string>& failures);
void check_tower_identities(std::mt19937_64& rng, long vectors,
                            std::vector<std::string>& failures, long* vectors_checked);
void check_worked_instance(std::vector<std::string>& failures);

}  // namespace swancond

#endif
