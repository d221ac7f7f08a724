#include "qcorr/error.hpp"

namespace qcorr {

std::string_view errc_name(Errc c) {
    switch (c) {
        case Errc::NonHermitianInput: return "NonHermitianInput";
        case Errc::NegativeEigenvalue: return "NegativeEigenvalue";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::InvalidTriple: return "InvalidTriple";
        case Errc::InvalidProbabilities: return "InvalidProbabilities";
        case Errc::InvalidParam: return "InvalidParam";
        case Errc::IncompleteKrausSet: return "IncompleteKrausSet";
        case Errc::InvalidAxis: return "InvalidAxis";
        case Errc::OutOfRangeQ: return "OutOfRangeQ";
        case Errc::UnknownName: return "UnknownName";
        case Errc::DegenerateInput: return "DegenerateInput";
        case Errc::BudgetTooSmall: return "BudgetTooSmall";
        case Errc::ParseError: return "ParseError";
    }
    return "UnknownError";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace qcorr
