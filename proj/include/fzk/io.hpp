#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fzk/diagnostics.hpp"
#include "fzk/experiment.hpp"
#include "fzk/spectral_grid.hpp"

namespace fzk {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

/// Parses flat `key = value` text ('#' starts a comment). Keys: n, l, alpha,
/// dt (number or "auto"), t_final, ic (repeatable), observe_every, out_dir,
/// seed. `ic` takes a kind followed by key=value parameters:
///
///   ic = soliton c=1 theta=0 x0=0 y0=0
///   ic = cosine amp=1 k1=1 k2=0 phase=0
///   ic = constant value=0.5
///   ic = random amp=1
///   ic = zero
///
/// Throws ParseError (with line) for malformed, unknown or duplicate keys and
/// ValidationError (with key) for out-of-range values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Text form accepted by parse_config.
std::string format_config(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Snapshot files: "FZKSNAP1", N (u32), M (u32), L, alpha, t (f64), then M*M
// f64 values row-major (first index along x1). Everything little-endian.

inline constexpr std::string_view kSnapshotMagic = "FZKSNAP1";
inline constexpr std::size_t kSnapshotHeaderBytes = 8 + 4 + 4 + 8 + 8 + 8;

struct SnapshotMeta {
  std::uint32_t n = 0;
  double alpha = 2.0;
  double t = 0.0;
};

std::vector<std::uint8_t> encode_snapshot(const RealField& field, const SnapshotMeta& meta);
std::pair<RealField, SnapshotMeta> decode_snapshot(std::span<const std::uint8_t> bytes);

void write_snapshot(const std::filesystem::path& path, const RealField& field, const SnapshotMeta& meta);
std::pair<RealField, SnapshotMeta> read_snapshot(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// CSV writers. Floats use 17 significant digits; missing orders are empty.

std::string format_double(double v);

std::string error_table_csv(const ErrorTable& table);
std::string invariants_csv(std::span<const InvariantRecord> series);
std::string temporal_order_csv(std::span<const TemporalOrderRow> rows);

void write_error_table(const std::filesystem::path& path, const ErrorTable& table);
void write_invariants(const std::filesystem::path& path, std::span<const InvariantRecord> series);

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> contents);

/// Lower-case hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------

struct RunManifest {
  std::string command;
  RunConfig config;
  std::map<std::string, double> timings;
  std::optional<Drift> drift;
  /// Paths relative to the manifest's directory.
  std::vector<std::filesystem::path> files;
};

/// JSON manifest with the config echo, version, timings, drifts and a
/// SHA-256 for every listed file (which must already exist).
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace fzk
