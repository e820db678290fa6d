#include "bicontact/errors.hpp"

#include <fmt/format.h>

namespace bicontact {

DomainError::DomainError(std::string fn, double value)
    : Error(fmt::format("domain error: {}({:.17g})", fn, value)),
      fn_(std::move(fn)),
      value_(value) {}

BudgetError::BudgetError(std::string stage)
    : Error(fmt::format("order budget exhausted in stage '{}'", stage)),
      stage_(std::move(stage)) {}

ParseError::ParseError(const std::string& what, std::size_t position)
    : Error(fmt::format("syntax error at position {}: {}", position, what)),
      position_(position) {}

UnknownIdentifier::UnknownIdentifier(std::string name)
    : Error(fmt::format("unknown identifier '{}'", name)), name_(std::move(name)) {}

InputError::InputError(const std::string& what, int line, int column)
    : Error(fmt::format("{}:{}: {}", line, column, what)), line_(line), column_(column) {}

NotIntegrable::NotIntegrable(double defect)
    : Error(fmt::format("omega3 is not integrable (defect {:.3e})", defect)), defect_(defect) {}

}  // namespace bicontact
