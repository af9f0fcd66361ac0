#pragma once

#include "herd/series.hpp"

#include <string>
#include <vector>

namespace herd {

// Interchange format: a header line `t,value` followed by decimal rows.
// Metadata goes to `<path>.meta.json` so the CSV stays plain.

void write_series_csv(const std::string& path, const UniformSeries& series,
                      bool with_sidecar = true);

// Reads the interchange CSV.  The time column must be uniformly spaced
// within a relative jitter of 1e-6; slightly jittered grids are
// re-gridded onto the mean spacing.  Malformed rows raise with the
// offending line number.
UniformSeries read_series_csv(const std::string& path);

// Generic numeric table, one row per line; used by histogram/spectrum
// output and by `analyze fit` input.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table_csv(const std::string& path, const Table& table);
Table read_table_csv(const std::string& path);

// FNV-1a 64-bit digest of a file's bytes, hex-encoded; recorded in run
// manifests so reproduction can be checked cheaply.
std::string file_digest(const std::string& path);

} // namespace herd
