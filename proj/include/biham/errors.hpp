#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "biham/linalg3.hpp"

namespace biham {

// Base class for all recoverable numerical-domain failures. Argument misuse
// (bad grades, bad config) throws std::invalid_argument instead.
struct BihamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The field magnitude dropped below eps_v where a direction was required.
struct VanishingFieldError : BihamError {
    Point3 where;
    VanishingFieldError(const std::string& msg, const Point3& at)
        : BihamError(msg), where(at) {}
};

// A finite-difference stencil or an integration step left the declared domain.
struct DomainBoundaryError : BihamError {
    Point3 where;
    DomainBoundaryError(const std::string& msg, const Point3& at)
        : BihamError(msg), where(at) {}
};

// The Gram-Schmidt reference axis came too close to +-e1 somewhere.
struct FrameDegeneracyError : BihamError {
    Point3 where;
    Vec3 suggested_axis;
    FrameDegeneracyError(const std::string& msg, const Point3& at, const Vec3& suggestion)
        : BihamError(msg), where(at), suggested_axis(suggestion) {}
};

// |mu1 - mu2| fell below the separation threshold; the Hamiltonians would be
// functionally dependent.
struct DegeneratePairError : BihamError {
    using BihamError::BihamError;
};

// A Riccati blow-up marker lies inside the requested span; the caller must
// restrict the tube.
struct SpanSplitError : BihamError {
    double blow_up_s;
    SpanSplitError(const std::string& msg, double s_at) : BihamError(msg), blow_up_s(s_at) {}
};

struct TubeConstructionError : BihamError {
    std::vector<std::pair<int, int>> failed_seeds;  // (ring, angle) indices
    TubeConstructionError(const std::string& msg, std::vector<std::pair<int, int>> seeds)
        : BihamError(msg), failed_seeds(std::move(seeds)) {}
};

// Periodic-grid data did not wrap within tolerance.
struct PeriodicityError : BihamError {
    using BihamError::BihamError;
};

// Adjacent mesh fibers differ by too large an angle for parallel transport.
struct RefineMeshError : BihamError {
    using BihamError::BihamError;
};

// A 1-form handed to a connection fit failed its integrability precondition.
struct NotPoissonError : BihamError {
    double jacobi_residual;
    NotPoissonError(const std::string& msg, double resid)
        : BihamError(msg), jacobi_residual(resid) {}
};

}  // namespace biham
