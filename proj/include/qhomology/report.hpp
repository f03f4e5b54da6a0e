#pragma once

// Uniform pass/fail bookkeeping for the verification suites. Every check
// carries a stable id and, on failure, a human-readable witness (typically
// the first offending matrix cell or vector), so a red run always points at
// concrete data.

#include <cstdint>
#include <string>
#include <vector>

namespace qh {

struct Check {
    std::string id;
    bool pass = false;
    std::string witness; // empty on pass
};

struct CheckReport {
    std::string suite;
    int h = 0;
    uint64_t seed = 0;
    std::vector<Check> checks;

    void add(std::string id, bool pass, std::string witness = {}) {
        checks.push_back(Check{std::move(id), pass, pass ? std::string{} : std::move(witness)});
    }
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const Check* first_failure() const {
        for (const auto& c : checks)
            if (!c.pass) return &c;
        return nullptr;
    }
};

inline std::string cell_witness(const std::pair<int, int>& cell) {
    return "cell (" + std::to_string(cell.first) + ", " + std::to_string(cell.second) + ")";
}

} // namespace qh
