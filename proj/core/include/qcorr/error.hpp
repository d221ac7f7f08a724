#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcorr {

enum class Errc {
    NonHermitianInput,
    NegativeEigenvalue,
    DimensionMismatch,
    InvalidTriple,
    InvalidProbabilities,
    InvalidParam,
    IncompleteKrausSet,
    InvalidAxis,
    OutOfRangeQ,
    UnknownName,
    DegenerateInput,
    BudgetTooSmall,
    ParseError,
};

std::string_view errc_name(Errc c);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what);
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace qcorr
