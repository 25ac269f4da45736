#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "streamkoop/numlin.hpp"
#include "streamkoop/snapshots.hpp"

namespace streamkoop {

/// Shortest text that reads back to the same double (17 significant digits).
std::string format_double(double value);

/// One row per sample: x1..xN,y1..yN.
void write_snapshots_csv(std::ostream& out, const SnapshotPairs& data);
void save_snapshots_csv(const std::filesystem::path& path, const SnapshotPairs& data);

/// Parses the snapshot CSV format. N is inferred from the header.
/// Throws ParseError with the offending line number.
SnapshotPairs read_snapshots_csv(std::istream& in);
SnapshotPairs ingest_csv(const std::filesystem::path& path);

/// Columns step,true_1..true_N,pred_1..pred_N; `truth` may be empty to omit
/// the true_* columns. `first_step` labels column 0.
void write_prediction_csv(std::ostream& out, const Matrix& pred, const Matrix& truth,
                          Index first_step = 0);

}  // namespace streamkoop
