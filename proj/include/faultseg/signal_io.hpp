#ifndef FAULTSEG_SIGNAL_IO_HPP
#define FAULTSEG_SIGNAL_IO_HPP

#include "faultseg/record.hpp"

#include <filesystem>
#include <optional>

namespace faultseg::io {

/// Reads a comma-separated file with a header row. A leading column named
/// `t` or `time` is taken as the time axis; every other column becomes a
/// Record. Headers may carry a unit suffix, e.g. `Ia[A]`.
///
/// When a time column exists, fs is inferred from the median spacing and
/// must match `fs_override` within 0.1 % if both are given. Without a time
/// column `fs_override` is mandatory.
RecordSet load_csv(const std::filesystem::path& path, std::optional<double> fs_override = {});

/// Writes `t,<channel>...` with 17 significant digits so that load_csv
/// restores every sample bit-for-bit.
void write_csv(const RecordSet& set, const std::filesystem::path& path);

/// IEEE C37.111-1991 ASCII reader. The `.dat` file is located next to the
/// `.cfg` file. Analog channels are scaled as `a * raw + b`; digital
/// channels are skipped. Binary data and multi-rate files are rejected.
RecordSet load_comtrade_1991_ascii(const std::filesystem::path& cfg_path);

enum class NormalizeMode { subtract_mean, divide_by_mean };

/// Removes (or divides by) the whole-record mean.
Record normalize(const Record& record, NormalizeMode mode = NormalizeMode::subtract_mean);

} // namespace faultseg::io

#endif
