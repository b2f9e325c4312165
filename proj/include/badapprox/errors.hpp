#pragma once

#include <stdexcept>
#include <string>

namespace badapprox {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSquarefree : Error { using Error::Error; };
struct ReducibleDetected : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };
struct MixedFields : Error { using Error::Error; };
struct PrecisionExhausted : Error { using Error::Error; };
struct NotCM : Error { using Error::Error; };
struct DegenerateForm : Error { using Error::Error; };
struct InfinityZero : Error { using Error::Error; };
struct LineNotCircle : Error { using Error::Error; };
struct NotTotallyPositive : Error { using Error::Error; };
struct NormObstructionMissing : Error { using Error::Error; };
struct NotAnisotropic : Error { using Error::Error; };
struct NotAZero : Error { using Error::Error; };
struct FactorZero : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

} // namespace badapprox
