#include "epddl/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace epddl {

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.is_error(); });
}

std::string render_diagnostic(const Diagnostic& d,
                              const std::vector<std::string>& file_names,
                              bool color) {
    const char* severity = d.is_error() ? "error" : "warning";
    std::ostringstream os;
    if (color) {
        os << (d.is_error() ? "\033[31m" : "\033[33m") << severity << "\033[0m";
    } else {
        os << severity;
    }
    std::string file = "<input>";
    if (d.span.file_id >= 0 && d.span.file_id < static_cast<int>(file_names.size()))
        file = file_names[d.span.file_id];
    os << " " << d.code << " " << file << ":" << d.span.start_line << ":"
       << d.span.start_col << " " << d.message;
    return os.str();
}

}  // namespace epddl
