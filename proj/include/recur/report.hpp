#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "recur/rational.hpp"
#include "recur/returns.hpp"

namespace recur {

// One base point's measured density row. For discrete systems `count` is an
// integer visit count and `frequency` an exact rational; continuous-time
// reports carry interval measures instead.
struct DensityRow {
    std::string system;
    std::string point;
    std::string epsilon;
    i64 window_begin = 0;  // M of the scanned horizon
    i64 window_end = 0;    // N of the scanned horizon
    double count = 0.0;    // visits (or measure) in the worst window
    i64 max_gap = -1;      // longest visit-free stretch over the horizon; -1 if n/a
    Rational frequency{0, 1};
    double frequency_value = 0.0;
    bool exact = true;  // frequency rational is authoritative (discrete systems)
    i64 argmin_start = 0;
    double margin = 0.0;  // frequency - effective certified bound
};

struct CertificateSummary {
    std::string system;
    std::uint64_t system_hash = 0;
    std::string epsilon;
    i64 covering_k = -1;
    std::uint64_t evidence_digest = 0;
    double slack = 0.0;
};

// Verification outcome for one uniform-bound run: the certificate used, the
// per-point density table, and the margin between the worst measured
// frequency and the certified bound.
struct DensityReport {
    std::string system;
    std::string epsilon;
    bool continuous = false;
    i64 window_length = 0;
    i64 horizon = 0;
    CertificateSummary certificate;
    Rational certified_bound{0, 1};   // exact bound (discrete systems)
    double certified_bound_value = 0; // same as a double; authoritative for flows
    double window_slack = 0.0;        // discretization slack subtracted before comparing
    std::vector<DensityRow> rows;
    double min_measured = 0.0;
    double margin = 0.0;  // min_measured - (certified - slack)
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);

// Canonical single-row serializations shared by every command output.
std::string profile_csv_row(const ReturnProfile& p);
std::string profile_json(const ReturnProfile& p);  // compact object, no times dump
std::string density_estimate_json(const DensityEstimate& e);

// RFC-4180 CSV: quotes fields containing separators or quotes.
std::string csv_escape(const std::string& field);

// Fixed column order: system,x,epsilon,M,N,count,max_gap,frequency
std::string density_rows_csv(const std::vector<DensityRow>& rows);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace recur
