// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "escale/core/dataset.hpp"

namespace escale::ingest {

enum class Format : std::uint8_t { csv, jsonl };

Format parse_format(std::string_view name);

// Malformed input, with the 1-based line it was found on.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = {});
  std::size_t line() const { return line_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

// CSV: comma-separated reals, one point per line. An optional first line
// of column names is recognized by a non-numeric field; if its first
// column is "id", that column holds point ids. JSONL: one object per line
// with "coords" (array of numbers) and optionally "id". Without ids,
// points are numbered by data row from 0. UTF-8, LF or CRLF; blank lines
// are skipped. An input with no data rows yields an empty dataset of
// dimension 0.
Dataset parse_vectors_text(std::string_view text, Format format,
                           DistanceDescriptor distance = {},
                           CoordDomain domain = CoordDomain::real);

Dataset parse_vectors(const std::filesystem::path& path, Format format,
                      DistanceDescriptor distance = {}, CoordDomain domain = CoordDomain::real);

// Canonical form: CSV with an "id,c0,...,c{d-1}" header, or JSONL objects
// {"id":..,"coords":[..]}. Reals use the shortest round-trip spelling, so
// parse(export(x)) reproduces x bit for bit.
void export_vectors(const Dataset& dataset, Format format, std::ostream& out);
std::string export_vectors_text(const Dataset& dataset, Format format);

// Shortest decimal that reads back to exactly `v`.
std::string format_real(double v);

}  // namespace escale::ingest
