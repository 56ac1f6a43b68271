#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gqkit {

struct GqError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidQuantifierError : GqError {
    using GqError::GqError;
};

struct UnknownSetError : GqError {
    explicit UnknownSetError(const std::string& name)
        : GqError("unknown set: " + name), set_name(name) {}
    std::string set_name;
};

struct UnknownFieldError : GqError {
    explicit UnknownFieldError(const std::string& name)
        : GqError("unknown field: " + name), field_name(name) {}
    std::string field_name;
};

struct ParseError : GqError {
    ParseError(const std::string& what, std::size_t line)
        : GqError(what + " (line " + std::to_string(line) + ")"), line_no(line) {}
    std::size_t line_no;
};

struct FormulaError : GqError {
    using GqError::GqError;
};

struct PatternError : GqError {
    using GqError::GqError;
};

// Enumeration blew past the node budget; the message names the limit so the
// caller knows what to raise.
struct SearchSpaceError : GqError {
    explicit SearchSpaceError(std::int64_t limit)
        : GqError("search space too large: exceeded work limit of " +
                  std::to_string(limit) +
                  " nodes (raise via GQKIT_WORK_LIMIT or the limits argument)"),
          limit(limit) {}
    std::int64_t limit;
};

// Distinct from a contradiction verdict: the premise itself has no model
// within the bound, so no three-way label is defensible.
struct UnsatisfiablePremiseError : GqError {
    explicit UnsatisfiablePremiseError(std::int64_t bound)
        : GqError("premise unsatisfiable within universe bound " +
                  std::to_string(bound)),
          bound(bound) {}
    std::int64_t bound;
};

struct AgreementError : GqError {
    using GqError::GqError;
};

struct TemplateError : GqError {
    using GqError::GqError;
};

struct BalanceError : GqError {
    BalanceError(const std::string& what, std::string histogram)
        : GqError(what), achieved(std::move(histogram)) {}
    std::string achieved;
};

struct UsageError : GqError {
    using GqError::GqError;
};

struct DataError : GqError {
    using GqError::GqError;
};

}  // namespace gqkit
