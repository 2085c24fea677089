// Standalone oracle suites behind `verify --suite <name>`: closed-form
// Kalman fixed point, least-squares LQG optimality, the Gaussian
// quadratic-expectation identity and the mean-square stability bound.

#ifndef RENDEZVOUS_VERIFY_HPP
#define RENDEZVOUS_VERIFY_HPP

#include <string>
#include <vector>

namespace rendezvous {

struct SuiteResult {
    std::string name;
    bool pass = true;
    std::vector<std::string> lines; // human-readable detail, one per check
};

SuiteResult verify_kalman();
SuiteResult verify_riccati();
SuiteResult verify_lemma1();
SuiteResult verify_bound();

SuiteResult run_suite(const std::string& name); // throws on unknown suite

} // namespace rendezvous

#endif
