#include "lexer.hpp"

#include <cctype>

namespace epddl::detail {

namespace {

constexpr int kMaxDiagnostics = 64;

// '!' is deliberately absent: the mAr-style `!f` negation is an output-only
// form and rejected on input
bool is_symbol_start(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '$' || c == '=' || c == '<' ||
           c == '>' || c == '+' || c == '*' || c == '/' || c == '.';
}

bool is_symbol_char(unsigned char c) { return is_symbol_start(c) || c == '-'; }

char lower(unsigned char c) { return static_cast<char>(std::tolower(c)); }

}  // namespace

LexOutput lex(std::string_view input, int file_id) {
    LexOutput out;
    size_t i = 0;
    int line = 1, col = 1;
    bool diag_overflow = false;

    auto here = [&](int len) {
        SourceSpan s;
        s.file_id = file_id;
        s.start_line = line;
        s.start_col = col;
        s.end_line = line;
        s.end_col = col + (len > 0 ? len - 1 : 0);
        return s;
    };
    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    auto report = [&](std::string msg, SourceSpan span) {
        if (diag_overflow) return;
        if (static_cast<int>(out.diagnostics.size()) >= kMaxDiagnostics) {
            out.diagnostics.push_back(
                {Severity::Error, codes::too_many_errors, "too many lexical errors; giving up", span});
            diag_overflow = true;
            return;
        }
        out.diagnostics.push_back({Severity::Error, codes::syntax, std::move(msg), span});
    };

    while (i < input.size()) {
        unsigned char c = static_cast<unsigned char>(input[i]);
        if (std::isspace(c)) {
            advance(static_cast<char>(c));
            continue;
        }
        if (c == ';') {
            while (i < input.size() && input[i] != '\n') advance(input[i]);
            continue;
        }
        if (c == '(') {
            out.tokens.push_back({TokenKind::LParen, "(", 0, here(1)});
            advance('(');
            continue;
        }
        if (c == ')') {
            out.tokens.push_back({TokenKind::RParen, ")", 0, here(1)});
            advance(')');
            continue;
        }
        if (c == '[') {
            out.tokens.push_back({TokenKind::LBracket, "[", 0, here(1)});
            advance('[');
            continue;
        }
        if (c == ']') {
            out.tokens.push_back({TokenKind::RBracket, "]", 0, here(1)});
            advance(']');
            continue;
        }
        if (c == '?' || c == ':') {
            bool variable = (c == '?');
            SourceSpan span = here(1);
            advance(static_cast<char>(c));
            std::string name;
            while (i < input.size()) {
                unsigned char n = static_cast<unsigned char>(input[i]);
                // variables stop at '-' so `?j-agent` splits into `?j - agent`
                if (variable && n == '-') break;
                if (!is_symbol_char(n)) break;
                name += lower(n);
                advance(static_cast<char>(n));
            }
            span.end_line = line;
            span.end_col = col > 1 ? col - 1 : col;
            if (name.empty()) {
                report(variable ? "expected a name after '?'" : "expected a name after ':'", span);
                continue;
            }
            out.tokens.push_back(
                {variable ? TokenKind::Variable : TokenKind::Keyword, name, 0, span});
            continue;
        }
        if (std::isdigit(c)) {
            SourceSpan span = here(1);
            std::string digits;
            while (i < input.size() && std::isdigit(static_cast<unsigned char>(input[i]))) {
                digits += input[i];
                advance(input[i]);
            }
            // a digit run followed by symbol characters is a symbol (e.g. 2x)
            if (i < input.size() && is_symbol_char(static_cast<unsigned char>(input[i])) &&
                input[i] != '-') {
                std::string name = digits;
                while (i < input.size() && is_symbol_char(static_cast<unsigned char>(input[i]))) {
                    name += lower(static_cast<unsigned char>(input[i]));
                    advance(input[i]);
                }
                span.end_line = line;
                span.end_col = col > 1 ? col - 1 : col;
                out.tokens.push_back({TokenKind::Symbol, name, 0, span});
                continue;
            }
            span.end_line = line;
            span.end_col = col > 1 ? col - 1 : col;
            long value = 0;
            bool overflow = digits.size() > 9;
            if (!overflow) value = std::stol(digits);
            if (overflow) {
                report("integer literal too large", span);
                continue;
            }
            out.tokens.push_back({TokenKind::Integer, digits, value, span});
            continue;
        }
        if (c == '-') {
            // lone '-' token: the variable/type separator
            out.tokens.push_back({TokenKind::Symbol, "-", 0, here(1)});
            advance('-');
            continue;
        }
        if (is_symbol_start(c)) {
            SourceSpan span = here(1);
            std::string name;
            while (i < input.size() && is_symbol_char(static_cast<unsigned char>(input[i]))) {
                name += lower(static_cast<unsigned char>(input[i]));
                advance(input[i]);
            }
            span.end_line = line;
            span.end_col = col > 1 ? col - 1 : col;
            out.tokens.push_back({TokenKind::Symbol, name, 0, span});
            continue;
        }
        report("unexpected character", here(1));
        advance(static_cast<char>(c));
        if (diag_overflow) break;
    }

    SourceSpan end_span;
    end_span.file_id = file_id;
    end_span.start_line = end_span.end_line = line;
    end_span.start_col = end_span.end_col = col;
    out.tokens.push_back({TokenKind::End, "", 0, end_span});
    return out;
}

}  // namespace epddl::detail
