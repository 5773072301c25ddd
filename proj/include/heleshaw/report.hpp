#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "heleshaw/csv.hpp"

namespace heleshaw {

/// One named inequality check: the measured violation (or fitted value), the
/// tolerance it is held to, and the claim string being verified.
struct ReportEntry {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string claim;  // the inequality or identity under test, in ASCII math
};

class VerificationReport {
public:
    void add(ReportEntry e) { entries_.push_back(std::move(e)); }

    ReportEntry& add(const std::string& name, double measured, double tolerance,
                     const std::string& claim) {
        entries_.push_back({name, measured, tolerance, measured <= tolerance, claim});
        return entries_.back();
    }

    const std::vector<ReportEntry>& entries() const { return entries_; }

    bool all_passed() const {
        return std::all_of(entries_.begin(), entries_.end(),
                           [](const ReportEntry& e) { return e.passed; });
    }

    void append(const VerificationReport& other) {
        for (const auto& e : other.entries()) entries_.push_back(e);
    }

    void write_csv(const std::string& path) const {
        CsvWriter w(path);
        w.row({"check", "measured", "tolerance", "pass", "claim"});
        for (const auto& e : entries_)
            w.row({e.name, csv_real(e.measured), csv_real(e.tolerance),
                   e.passed ? "pass" : "FAIL", e.claim});
    }

private:
    std::vector<ReportEntry> entries_;
};

}  // namespace heleshaw
