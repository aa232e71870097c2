#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "uqr/qscalar.hpp"

namespace uqr {

/// One failing instance of a checked identity. Vectors are columns in the
/// module's standard basis; either side may be empty when not meaningful.
struct Counterexample {
    std::string where;
    std::vector<FieldElement> lhs;
    std::vector<FieldElement> rhs;
};

struct CheckReport {
    std::string name;
    std::vector<Counterexample> counterexamples;
    double seconds = 0;

    bool pass() const { return counterexamples.empty(); }
    void fail(std::string where, std::vector<FieldElement> lhs = {}, std::vector<FieldElement> rhs = {}) {
        counterexamples.push_back({std::move(where), std::move(lhs), std::move(rhs)});
    }
    void absorb(const CheckReport& other) {
        for (const auto& c : other.counterexamples)
            counterexamples.push_back({other.name + ": " + c.where, c.lhs, c.rhs});
    }
};

/// Times a callable that fills a report.
template <class F>
CheckReport timed_check(std::string name, F&& body) {
    CheckReport r{std::move(name), {}, 0};
    const auto t0 = std::chrono::steady_clock::now();
    body(r);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace uqr
