// Internal generic s-expression layer between the lexer and the AST
// readers. Bracket groups (`[?i]`, `[a b c]`) are kept as their own node
// kind; attaching them to the formula that follows happens in the reader.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "epddl/diagnostics.hpp"

namespace epddl::detail {

struct SExpr {
    enum class Kind { List, Brackets, Symbol, Keyword, Variable, Integer };

    Kind kind = Kind::List;
    std::string text;  // Symbol/Keyword/Variable payload
    long value = 0;    // Integer payload
    std::vector<SExpr> items;
    SourceSpan span;

    bool is(Kind k) const { return kind == k; }
    bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
};

struct ReadOutput {
    std::vector<SExpr> forms;  // top-level forms
    std::vector<Diagnostic> diagnostics;
};

// Never fails hard: malformed input yields diagnostics and as many forms
// as could be recovered.
ReadOutput read_sexprs(std::string_view input, int file_id);

}  // namespace epddl::detail
