#include "sdeclass/dataset_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "sdeclass/errors.hpp"

namespace sdeclass {
namespace {

static_assert(std::endian::native == std::endian::little, "binary dataset format assumes little endian");

constexpr std::array<char, 8> kMagic{'S', 'D', 'E', 'P', 'A', 'T', 'H', '1'};

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw FormatError("unexpected end of binary dataset");
  return value;
}

void write_binary(std::ostream& out, const LabeledDataset& data) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint64_t>(out, data.size());
  put<std::uint64_t>(out, static_cast<std::uint64_t>(data.steps));
  put<double>(out, data.delta);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(data.num_classes));
  put<std::uint32_t>(out, 0);
  for (std::size_t j = 0; j < data.size(); ++j) {
    put<std::int32_t>(out, data.labels[j]);
    const auto& v = data.paths[j].values;
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
}

LabeledDataset read_binary(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw FormatError("not a binary path dataset (bad magic)");
  const auto n_paths = get<std::uint64_t>(in);
  const auto steps = get<std::uint64_t>(in);
  LabeledDataset data;
  data.delta = get<double>(in);
  data.num_classes = static_cast<int>(get<std::uint32_t>(in));
  (void)get<std::uint32_t>(in);
  if (steps < 1 || steps > (1u << 30)) throw FormatError("invalid step count in dataset header");
  data.steps = static_cast<int>(steps);
  data.paths.reserve(n_paths);
  data.labels.reserve(n_paths);
  for (std::uint64_t j = 0; j < n_paths; ++j) {
    data.labels.push_back(get<std::int32_t>(in));
    Path p;
    p.steps = data.steps;
    p.delta = data.delta;
    p.values.resize(steps + 1);
    if (!in.read(reinterpret_cast<char*>(p.values.data()),
                 static_cast<std::streamsize>(p.values.size() * sizeof(double))))
      throw FormatError("unexpected end of binary dataset in row " + std::to_string(j));
    data.paths.push_back(std::move(p));
  }
  return data;
}

void write_csv(std::ostream& out, const LabeledDataset& data) {
  out << "N,n,delta,K\n";
  out.precision(17);
  out << data.size() << ',' << data.steps << ',' << data.delta << ',' << data.num_classes << '\n';
  for (std::size_t j = 0; j < data.size(); ++j) {
    out << data.labels[j];
    for (double v : data.paths[j].values) out << ',' << v;
    out << '\n';
  }
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

template <class T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw FormatError("bad number '" + std::string(field) + "' on line " + std::to_string(line_no));
  return value;
}

LabeledDataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("N,n,delta,K", 0) != 0)
    throw FormatError("CSV dataset must start with the header 'N,n,delta,K'");
  if (!std::getline(in, line)) throw FormatError("CSV dataset is missing its metadata row");
  const auto meta = split(line);
  if (meta.size() != 4) throw FormatError("CSV metadata row must have 4 fields");
  const auto n_paths = parse_number<std::size_t>(meta[0], 2);
  LabeledDataset data;
  data.steps = parse_number<int>(meta[1], 2);
  data.delta = parse_number<double>(meta[2], 2);
  data.num_classes = parse_number<int>(meta[3], 2);
  if (data.steps < 1) throw FormatError("invalid step count in CSV metadata");
  std::size_t line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != static_cast<std::size_t>(data.steps) + 2)
      throw FormatError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(data.steps + 2));
    data.labels.push_back(parse_number<int>(fields[0], line_no));
    Path p;
    p.steps = data.steps;
    p.delta = data.delta;
    p.values.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) p.values.push_back(parse_number<double>(fields[i], line_no));
    data.paths.push_back(std::move(p));
  }
  if (data.paths.size() != n_paths)
    throw FormatError("CSV declares " + std::to_string(n_paths) + " paths but contains " +
                      std::to_string(data.paths.size()));
  return data;
}

}  // namespace

DatasetFormat format_for(const std::filesystem::path& file) {
  return file.extension() == ".csv" ? DatasetFormat::Csv : DatasetFormat::Binary;
}

void write_dataset(std::ostream& out, const LabeledDataset& data, DatasetFormat format) {
  if (format == DatasetFormat::Binary)
    write_binary(out, data);
  else
    write_csv(out, data);
}

LabeledDataset read_dataset(std::istream& in, DatasetFormat format) {
  LabeledDataset data = format == DatasetFormat::Binary ? read_binary(in) : read_csv(in);
  try {
    data.validate();
  } catch (const ParameterError& e) {
    throw FormatError(std::string("dataset violates its invariants: ") + e.what());
  }
  return data;
}

void save_dataset(const std::filesystem::path& file, const LabeledDataset& data) {
  const auto format = format_for(file);
  std::ofstream out(file, format == DatasetFormat::Binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open '" + file.string() + "' for writing");
  write_dataset(out, data, format);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + file.string() + "'");
}

LabeledDataset load_dataset(const std::filesystem::path& file) {
  const auto format = format_for(file);
  std::ifstream in(file, format == DatasetFormat::Binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open '" + file.string() + "'");
  return read_dataset(in, format);
}

}  // namespace sdeclass
