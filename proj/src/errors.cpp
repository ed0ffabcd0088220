#include "setr/errors.hpp"

namespace setr {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Domain: return "DomainError";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
        case ErrorKind::TailUndefined: return "TailUndefined";
        case ErrorKind::DivergentExpectation: return "DivergentExpectation";
        case ErrorKind::Validation: return "ValidationError";
        case ErrorKind::Io: return "IoError";
    }
    return "Error";
}

}  // namespace setr
