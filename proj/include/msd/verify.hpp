#pragma once

#include <string>
#include <vector>

namespace msd {

struct SuiteRow {
    std::string family;
    std::string name;
    bool pass = true;
    bool report_only = false;  // informational rows never fail the suite
    double value = 0.0;
    std::string note;
};

struct SuiteReport {
    std::vector<SuiteRow> rows;

    bool all_pass() const {
        for (const auto& r : rows)
            if (!r.report_only && !r.pass) return false;
        return true;
    }
    int violations(const std::string& family) const {
        int v = 0;
        for (const auto& r : rows)
            if (r.family == family && !r.report_only && !r.pass) ++v;
        return v;
    }
};

/// Runs the module invariant suites (energy models, measure engine, cell
/// solver, relaxed functional, approximation) with the given seed/budget.
SuiteReport run_property_suite(unsigned seed, int budget);

}  // namespace msd
