#ifndef STOKESLAB_SUITES_HPP
#define STOKESLAB_SUITES_HPP

#include <string>

namespace stokeslab {

// Seeded property suites. Cases are independent; with `parallel` they fan
// out across OpenMP workers and the report is assembled in case order, so
// the bytes never depend on the schedule.
struct SuiteResult {
    bool pass = true;
    std::string report;
};

SuiteResult suite_hkfl(unsigned long long seed, int cases, bool parallel);
SuiteResult suite_roundtrip(unsigned long long seed, int cases, bool parallel);
SuiteResult suite_euler(unsigned long long seed, int cases, bool parallel);
SuiteResult suite_newton(unsigned long long seed, int cases, bool parallel);

SuiteResult run_suite(const std::string& name, unsigned long long seed, int cases, bool parallel);

}  // namespace stokeslab

#endif
