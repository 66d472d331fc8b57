// SPDX-License-Identifier: Apache-2.0
#include "escale/ingest/parse.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace escale::ingest {

ParseError::ParseError(std::size_t line, const std::string& message, const std::string& source)
    : std::runtime_error((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " + message),
      line_(line),
      message_(message) {}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "jsonl") return Format::jsonl;
  throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or jsonl)");
}

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> to_real(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<PointId> to_id(std::string_view s) {
  s = trim(s);
  PointId v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// Iterates lines, handing (1-based line number, content without EOL).
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    start = end + 1;
  }
}

void add_row(std::optional<Dataset>& pending, std::size_t line, PointId id,
             const std::vector<double>& coords, DistanceDescriptor distance, CoordDomain domain) {
  if (!pending) pending.emplace(coords.size(), distance, domain);
  if (coords.size() != pending->dimension()) {
    throw ParseError(line, "expected " + std::to_string(pending->dimension()) + " coordinates, found " +
                               std::to_string(coords.size()));
  }
  try {
    pending->add(id, coords);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

Dataset parse_csv(std::string_view text, DistanceDescriptor distance, CoordDomain domain) {
  Dataset empty(0, distance, domain);
  std::optional<Dataset> ds;
  bool header_seen = false;
  bool has_id = false;
  std::size_t row = 0;
  std::vector<double> coords;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    const auto fields = split_fields(line);
    if (!header_seen && row == 0) {
      header_seen = true;
      if (!to_real(fields.front())) {
        for (const auto f : fields) {
          if (to_real(f)) throw ParseError(line_no, "header mixes names and numbers");
        }
        has_id = trim(fields.front()) == "id";
        // The header declares the dimension, even if no rows follow.
        const std::size_t declared = fields.size() - (has_id ? 1 : 0);
        if (declared > 0) ds.emplace(declared, distance, domain);
        return;
      }
    }
    coords.clear();
    PointId id = row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (has_id && i == 0) {
        const auto parsed = to_id(fields[i]);
        if (!parsed) throw ParseError(line_no, "id '" + std::string(trim(fields[i])) + "' is not a non-negative integer");
        id = *parsed;
        continue;
      }
      const auto v = to_real(fields[i]);
      if (!v) throw ParseError(line_no, "field " + std::to_string(i + 1) + " ('" + std::string(trim(fields[i])) + "') is not a number");
      coords.push_back(*v);
    }
    add_row(ds, line_no, id, coords, distance, domain);
    ++row;
  });
  return ds ? std::move(*ds) : std::move(empty);
}

Dataset parse_jsonl(std::string_view text, DistanceDescriptor distance, CoordDomain domain) {
  Dataset empty(0, distance, domain);
  std::optional<Dataset> ds;
  std::size_t row = 0;
  std::vector<double> coords;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (trim(line).empty()) return;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object() || !obj.contains("coords") || !obj["coords"].is_array()) {
      throw ParseError(line_no, "expected an object with a \"coords\" array");
    }
    PointId id = row;
    if (obj.contains("id")) {
      const auto& jid = obj["id"];
      if (!jid.is_number_unsigned()) throw ParseError(line_no, "\"id\" must be a non-negative integer");
      id = jid.get<PointId>();
    }
    coords.clear();
    for (const auto& v : obj["coords"]) {
      if (!v.is_number()) throw ParseError(line_no, "coordinate is not a number");
      coords.push_back(v.get<double>());
    }
    add_row(ds, line_no, id, coords, distance, domain);
    ++row;
  });
  return ds ? std::move(*ds) : std::move(empty);
}

}  // namespace

Dataset parse_vectors_text(std::string_view text, Format format, DistanceDescriptor distance,
                           CoordDomain domain) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  return format == Format::csv ? parse_csv(text, distance, domain) : parse_jsonl(text, distance, domain);
}

Dataset parse_vectors(const std::filesystem::path& path, Format format, DistanceDescriptor distance,
                      CoordDomain domain) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_vectors_text(buf.str(), format, distance, domain);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.message(), path.string());
  }
}

void export_vectors(const Dataset& dataset, Format format, std::ostream& out) {
  const std::size_t dim = dataset.dimension();
  if (format == Format::csv) {
    out << "id";
    for (std::size_t j = 0; j < dim; ++j) out << ",c" << j;
    out << '\n';
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      out << dataset.id(i);
      for (const double v : dataset.coords(i)) out << ',' << format_real(v);
      out << '\n';
    }
    return;
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << "{\"id\":" << dataset.id(i) << ",\"coords\":[";
    const auto c = dataset.coords(i);
    for (std::size_t j = 0; j < c.size(); ++j) out << (j ? "," : "") << format_real(c[j]);
    out << "]}\n";
  }
}

std::string export_vectors_text(const Dataset& dataset, Format format) {
  std::ostringstream out;
  export_vectors(dataset, format, out);
  return out.str();
}

}  // namespace escale::ingest
