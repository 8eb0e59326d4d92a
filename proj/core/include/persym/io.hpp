// On-disk formats: signal CSV / binary, period-cell samples, symbol JSON.
// All floating-point text output uses 17 significant digits so files
// round-trip exactly.
#pragma once

#include <filesystem>
#include <string>

#include "persym/signal.hpp"
#include "persym/symbol.hpp"

namespace persym {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// CSV: "# persym signal v1 dim=<d> extent=<T> npoints=<N>", a column header,
// then one row per node: coordinate(s), Re, Im.
void save_signal_csv(const GridSignal& f, const std::filesystem::path& path);
GridSignal load_signal_csv(const std::filesystem::path& path);

// Binary: magic "PSYMSIG1", u32 dim, u32 npoints, f64 extent, then
// little-endian float64 (re, im) pairs, row-major.
void save_signal_bin(const GridSignal& f, const std::filesystem::path& path);
GridSignal load_signal_bin(const std::filesystem::path& path);

/// Dispatches on extension: ".csv" text, anything else binary.
void save_signal(const GridSignal& f, const std::filesystem::path& path);
GridSignal load_signal(const std::filesystem::path& path);

// Cell samples share the signal layouts with unit-cell coordinates and the
// period matrix embedded in the header (CSV) or after the magic (binary,
// magic "PSYMCEL1").
void save_cell_samples_csv(const PeriodCellSamples& c, const std::filesystem::path& path);
PeriodCellSamples load_cell_samples_csv(const std::filesystem::path& path);
void save_cell_samples_bin(const PeriodCellSamples& c, const std::filesystem::path& path);
PeriodCellSamples load_cell_samples_bin(const std::filesystem::path& path);
void save_cell_samples(const PeriodCellSamples& c, const std::filesystem::path& path);
PeriodCellSamples load_cell_samples(const std::filesystem::path& path);

// Symbol files: JSON with the period matrix (row-major) and a coefficient
// record list (kappa entries, Re, Im).
void save_symbol_json(const PeriodicSymbol& p, const std::filesystem::path& path);
PeriodicSymbol load_symbol_json(const std::filesystem::path& path);

/// %.17g formatting used across all text emitters.
std::string format_double(double v);

}  // namespace persym
