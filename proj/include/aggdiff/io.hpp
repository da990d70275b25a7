#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace aggdiff {

/// Shortest round-trip decimal rendering of a double (to_chars), so equal
/// inputs always produce byte-identical text.
std::string format_double(double v);

/// Minimal CSV emitter: header row, LF line endings, UTF-8, numbers in
/// shortest round-trip form.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<double>& values);
  void add_row_raw(const std::vector<std::string>& cells);

  /// Writes the accumulated table; creates parent directories.
  void write(const std::filesystem::path& path) const;

  const std::string& text() const { return body_; }

private:
  std::string body_;
  std::size_t columns_ = 0;
};

/// Writes text to path, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Minimal SVG line chart (one polyline per series) with axes; no external
/// dependencies. Data-only CSV remains the primary artifact; this is an
/// optional convenience for quick looks.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

std::string render_svg_chart(const std::string& title,
                             const std::vector<SvgSeries>& series,
                             int width = 720, int height = 420);

}  // namespace aggdiff
