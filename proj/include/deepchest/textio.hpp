#ifndef DEEPCHEST_TEXTIO_HPP
#define DEEPCHEST_TEXTIO_HPP

#include <string>
#include <string_view>
#include <vector>

namespace deepchest {

/// Number formatting for emitted CSV files: 9 significant digits, general
/// form, locale-independent. Every float this project writes to a CSV goes
/// through here so repeated runs are byte-identical.
std::string fmt_g9(double v);

/// Locale-independent strtod over the full string. Returns false on any
/// trailing garbage or empty input.
bool parse_double(std::string_view s, double& out);

/// Splits one CSV line on commas. The formats here never quote, so this is a
/// plain scan.
std::vector<std::string_view> split_csv_line(std::string_view line);

/// Reads a whole file; throws FileNotFound / IoError.
std::string read_file(const std::string& path);

/// Writes content to path via a temp file in the same directory plus rename,
/// so readers never observe a half-written file.
void atomic_write_file(const std::string& path, std::string_view content);

} // namespace deepchest

#endif
