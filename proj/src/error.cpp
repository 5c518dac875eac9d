#include "fuzzybeta/error.hpp"

namespace fuzzybeta {

RowDomainError::RowDomainError(std::size_t row, const std::string& what)
    : DomainError("row " + std::to_string(row) + ": " + what), row_(row) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace fuzzybeta
