// Source spans and diagnostics shared by every pass.
//
// Diagnostics are plain values: a pass collects them into a vector and the
// caller decides what to do. Error-severity diagnostics prevent downstream
// passes; warnings travel with the result. Codes are stable identifiers and
// part of the tool's contract (tests and external consumers match on them).

#pragma once

#include <string>
#include <vector>

namespace epddl {

struct SourceSpan {
    int file_id = 0;
    int start_line = 1;
    int start_col = 1;
    int end_line = 1;
    int end_col = 1;

    bool operator==(const SourceSpan&) const = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceSpan span;

    bool is_error() const { return severity == Severity::Error; }
};

namespace codes {
// parser
inline constexpr const char* syntax = "E_SYNTAX";
inline constexpr const char* unbalanced = "E_UNBALANCED";
inline constexpr const char* unknown_section = "E_UNKNOWN_SECTION";
inline constexpr const char* duplicate_section = "E_DUP_SECTION";
inline constexpr const char* duplicate_action = "E_DUP_ACTION";
inline constexpr const char* duplicate_agent = "E_DUP_AGENT";
inline constexpr const char* duplicate_predicate = "E_DUP_PREDICATE";
inline constexpr const char* missing_field = "E_MISSING_FIELD";
inline constexpr const char* bad_act_type = "E_BAD_ACT_TYPE";
inline constexpr const char* bad_depth = "E_BAD_DEPTH";
inline constexpr const char* no_agents = "E_NO_AGENTS";
inline constexpr const char* too_many_errors = "E_TOO_MANY_ERRORS";
// validator
inline constexpr const char* domain_mismatch = "E_DOMAIN_MISMATCH";
inline constexpr const char* effect_shape = "E_EFFECT_SHAPE";
inline constexpr const char* undeclared_predicate = "E_UNDECLARED_PREDICATE";
inline constexpr const char* arity_mismatch = "E_ARITY_MISMATCH";
inline constexpr const char* unbound_variable = "E_UNBOUND_VARIABLE";
inline constexpr const char* unknown_agent = "E_UNKNOWN_AGENT";
inline constexpr const char* missing_mep = "E_MISSING_MEP";
inline constexpr const char* unknown_type = "E_UNKNOWN_TYPE";
inline constexpr const char* not_finitary_s5 = "W_NOT_FINITARY_S5";
inline constexpr const char* depth_exceeded = "W_DEPTH_EXCEEDED";
inline constexpr const char* ontic_partial = "W_ONTIC_PARTIAL";
// backends
inline constexpr const char* unrepresentable = "E_UNREPRESENTABLE";
inline constexpr const char* unsupported_goal = "E_UNSUPPORTED_GOAL";
inline constexpr const char* unsupported_cond = "E_UNSUPPORTED_COND";
// oracle
inline constexpr const char* inconsistent_init = "E_INCONSISTENT_INIT";
inline constexpr const char* not_constructible = "E_NOT_CONSTRUCTIBLE";
inline constexpr const char* precondition_failed = "E_PRECONDITION_FAILED";
// cli
inline constexpr const char* io = "E_IO";
}  // namespace codes

bool has_errors(const std::vector<Diagnostic>& diags);

// Line format: `severity CODE file:line:col message`. The file name is
// resolved through `file_names` by span.file_id; out-of-range ids render
// as "<input>". `color` wraps the severity in ANSI codes.
std::string render_diagnostic(const Diagnostic& d,
                              const std::vector<std::string>& file_names,
                              bool color = false);

}  // namespace epddl
