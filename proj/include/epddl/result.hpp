#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "epddl/diagnostics.hpp"

namespace epddl {

// Value-or-diagnostics carrier. A result holds a value only when no error
// diagnostics were produced; warnings may accompany a value.
template <typename T>
struct Result {
    std::optional<T> value;
    std::vector<Diagnostic> diagnostics;

    [[nodiscard]] bool ok() const { return value.has_value(); }

    static Result success(T v, std::vector<Diagnostic> warnings = {}) {
        Result r;
        r.value = std::move(v);
        r.diagnostics = std::move(warnings);
        return r;
    }

    static Result failure(std::vector<Diagnostic> diags) {
        Result r;
        r.diagnostics = std::move(diags);
        return r;
    }
};

}  // namespace epddl
