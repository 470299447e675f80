#pragma once

#include <stdexcept>
#include <string>

namespace normal {

// Invalid input or an unsatisfiable configuration. The CLI maps these to exit code 2.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A configured resource cap (precision, enumeration width, scale) was hit. Exit code 3.
class LimitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class MultiplicativelyDependent : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class HorizonTooShort : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class PlanInfeasible : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class EmptySet : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class ScheduleInvalid : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

class PrecisionExhausted : public LimitError {
  public:
    using LimitError::LimitError;
};

class WidthExceedsCap : public LimitError {
  public:
    using LimitError::LimitError;
};

class ScaleExceedsCap : public LimitError {
  public:
    using LimitError::LimitError;
};

} // namespace normal
