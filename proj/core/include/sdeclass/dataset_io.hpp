#pragma once

#include <filesystem>
#include <iosfwd>

#include "sdeclass/diffusion_sim.hpp"

namespace sdeclass {

// Binary layout (little endian):
//   char[8]  magic "SDEPATH1"
//   u64      N
//   u64      n (steps)
//   f64      delta
//   u32      K
//   u32      reserved (0)
//   N rows of { i32 label; f64 values[n + 1]; }
//
// CSV layout:
//   N,n,delta,K
//   <N>,<n>,<delta>,<K>
//   label,x_0,...,x_n          (one row per path, 17 significant digits)

enum class DatasetFormat { Binary, Csv };

/// .csv selects CSV, anything else binary.
DatasetFormat format_for(const std::filesystem::path& file);

void write_dataset(std::ostream& out, const LabeledDataset& data, DatasetFormat format);
LabeledDataset read_dataset(std::istream& in, DatasetFormat format);

/// Throws std::runtime_error if the file cannot be opened, FormatError on
/// malformed contents.
void save_dataset(const std::filesystem::path& file, const LabeledDataset& data);
LabeledDataset load_dataset(const std::filesystem::path& file);

}  // namespace sdeclass
