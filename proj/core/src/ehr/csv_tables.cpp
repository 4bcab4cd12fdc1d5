// Copyright 2026 The mplite Authors
// SPDX-License-Identifier: Apache-2.0

#include "mplite/ehr/csv_tables.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <functional>
#include <optional>
#include <sstream>

#include "mplite/common/error.hpp"
#include "mplite/common/files.hpp"

namespace mplite::ehr {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::string_view source, std::size_t row, const std::string& what) {
  throw DataError(std::string(source) + ": row " + std::to_string(row) + ": " + what);
}

std::int64_t parse_int(std::string_view text, std::string_view source, std::size_t row,
                       std::string_view column) {
  const auto t = trim(text);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    fail(source, row, "unparseable " + std::string(column) + " '" + std::string(text) + "'");
  }
  return value;
}

// Drives a header-checked row loop; `columns` holds the required names and
// `emit` receives the fields in that order.
template <std::size_t N>
void parse_table(std::string_view text, std::string_view source, const std::array<std::string_view, N>& columns,
                 const std::function<void(const std::array<std::string_view, N>&, std::size_t)>& emit) {
  std::size_t row = 0;
  std::size_t pos = 0;
  std::optional<std::array<std::size_t, N>> index;
  std::size_t header_width = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++row;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (!index) {
      std::array<std::size_t, N> idx{};
      for (std::size_t c = 0; c < N; ++c) {
        auto it = std::find_if(fields.begin(), fields.end(),
                               [&](const std::string& f) { return lower(trim(f)) == columns[c]; });
        if (it == fields.end()) {
          throw DataError(std::string(source) + ": header is missing column '" + std::string(columns[c]) + "'");
        }
        idx[c] = static_cast<std::size_t>(it - fields.begin());
      }
      index = idx;
      header_width = fields.size();
      continue;
    }
    if (fields.size() != header_width) {
      fail(source, row,
           "expected " + std::to_string(header_width) + " fields, found " + std::to_string(fields.size()));
    }
    std::array<std::string_view, N> picked{};
    for (std::size_t c = 0; c < N; ++c) {
      picked[c] = trim(fields[(*index)[c]]);
      if (picked[c].empty()) fail(source, row, "missing " + std::string(columns[c]));
    }
    emit(picked, row);
  }
  if (!index) throw DataError(std::string(source) + ": missing header row");
}

std::string quote_if_needed(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::vector<AdmissionEvent> parse_admissions(std::string_view text, std::string_view source) {
  std::vector<AdmissionEvent> out;
  static constexpr std::array<std::string_view, 3> kCols{"patient_id", "visit_id", "admit_time"};
  parse_table<3>(text, source, kCols, [&](const auto& f, std::size_t row) {
    out.push_back({std::string(f[0]), std::string(f[1]), parse_int(f[2], source, row, "admit_time"), row});
  });
  return out;
}

std::vector<DiagnosisEvent> parse_diagnoses(std::string_view text, std::string_view source) {
  std::vector<DiagnosisEvent> out;
  static constexpr std::array<std::string_view, 3> kCols{"patient_id", "visit_id", "icd_code"};
  parse_table<3>(text, source, kCols, [&](const auto& f, std::size_t row) {
    out.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), row});
  });
  return out;
}

std::vector<LabEvent> parse_labevents(std::string_view text, std::string_view source) {
  std::vector<LabEvent> out;
  static constexpr std::array<std::string_view, 5> kCols{"patient_id", "visit_id", "item_code", "abnormal",
                                                         "timestamp"};
  parse_table<5>(text, source, kCols, [&](const auto& f, std::size_t row) {
    bool abnormal = false;
    if (f[3] == "1") {
      abnormal = true;
    } else if (f[3] != "0") {
      fail(source, row, "abnormal must be 0 or 1, got '" + std::string(f[3]) + "'");
    }
    out.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2]), abnormal,
                   parse_int(f[4], source, row, "timestamp"), row});
  });
  return out;
}

std::vector<AdmissionEvent> load_admissions(const std::filesystem::path& path) {
  return parse_admissions(read_file(path), path.string());
}

std::vector<DiagnosisEvent> load_diagnoses(const std::filesystem::path& path) {
  return parse_diagnoses(read_file(path), path.string());
}

std::vector<LabEvent> load_labevents(const std::filesystem::path& path) {
  return parse_labevents(read_file(path), path.string());
}

std::string format_admissions(std::span<const AdmissionEvent> rows) {
  std::ostringstream out;
  out << "patient_id,visit_id,admit_time\n";
  for (const auto& r : rows) {
    out << quote_if_needed(r.patient_id) << ',' << quote_if_needed(r.visit_id) << ',' << r.admit_time << '\n';
  }
  return out.str();
}

std::string format_diagnoses(std::span<const DiagnosisEvent> rows) {
  std::ostringstream out;
  out << "patient_id,visit_id,icd_code\n";
  for (const auto& r : rows) {
    out << quote_if_needed(r.patient_id) << ',' << quote_if_needed(r.visit_id) << ','
        << quote_if_needed(r.icd_code) << '\n';
  }
  return out.str();
}

std::string format_labevents(std::span<const LabEvent> rows) {
  std::ostringstream out;
  out << "patient_id,visit_id,item_code,abnormal,timestamp\n";
  for (const auto& r : rows) {
    out << quote_if_needed(r.patient_id) << ',' << quote_if_needed(r.visit_id) << ','
        << quote_if_needed(r.item_code) << ',' << (r.abnormal ? 1 : 0) << ',' << r.timestamp << '\n';
  }
  return out.str();
}

}  // namespace mplite::ehr
