#pragma once

#include <stdexcept>
#include <string>

namespace lattheta {

// Exit-code families used by the CLI:
//   InvalidInput          -> 2 (malformed or rejected input data)
//   PreconditionViolation -> 3 (well-formed input outside a routine's contract)
//   InternalInconsistency -> 4 (a proven invariant failed at runtime; always a bug)
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PreconditionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InternalInconsistency : std::logic_error {
    using std::logic_error::logic_error;
};

struct NotSymmetric final : InvalidInput {
    NotSymmetric() : InvalidInput("gram matrix is not symmetric") {}
};

struct NotEven final : InvalidInput {
    NotEven() : InvalidInput("gram matrix has an odd diagonal entry") {}
};

struct NotPositiveDefinite final : InvalidInput {
    NotPositiveDefinite() : InvalidInput("gram matrix is not positive definite") {}
};

struct NotIsometry final : InvalidInput {
    NotIsometry() : InvalidInput("matrix does not preserve the bilinear form") {}
};

struct OrderBoundExceeded final : PreconditionViolation {
    OrderBoundExceeded() : PreconditionViolation("automorphism order exceeds the configured bound") {}
};

struct NoSolution final : PreconditionViolation {
    explicit NoSolution(const std::string& what) : PreconditionViolation(what) {}
};

inline void internal_check(bool ok, const char* what) {
    if (!ok) throw InternalInconsistency(what);
}

} // namespace lattheta
