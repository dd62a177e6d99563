// Times the property suites with the serial reference runner against the
// OpenMP fan-out and checks the reports are byte-identical.
#include <chrono>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stokeslab/suites.hpp"

using namespace stokeslab;

namespace {

double run_timed(const std::string& name, unsigned long long seed, int cases, bool parallel,
                 std::string& report) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r = run_suite(name, seed, cases, parallel);
    auto t1 = std::chrono::steady_clock::now();
    report = r.report;
    if (!r.pass) {
        std::cerr << r.report;
        std::exit(2);
    }
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    unsigned long long seed = argc > 1 ? std::stoull(argv[1]) : 1;
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::cout << "workers available: " << threads << "\n";
    for (const std::string name : {"hkfl", "euler", "newton", "roundtrip"}) {
        int cases = name == "roundtrip" ? 8 : 32;
        std::string serial_report, parallel_report;
        double ts = run_timed(name, seed, cases, false, serial_report);
        double tp = run_timed(name, seed, cases, true, parallel_report);
        bool identical = serial_report == parallel_report;
        std::cout << name << ": serial " << ts << "s, parallel " << tp << "s, speedup "
                  << (tp > 0 ? ts / tp : 0.0) << "x, reports "
                  << (identical ? "identical" : "DIFFER") << "\n";
        if (!identical) return 3;
    }
    return 0;
}
