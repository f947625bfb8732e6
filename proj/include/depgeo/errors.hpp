#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace depgeo {

/// Base class of all library errors. When a tolerance check fails, the
/// measured residual is attached so callers can see by how much.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg,
                   double residual = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(msg), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

#define DEPGEO_ERROR_TYPE(Name)                                                \
    class Name : public Error {                                               \
    public:                                                                    \
        using Error::Error;                                                    \
    }

DEPGEO_ERROR_TYPE(InvalidInput);
DEPGEO_ERROR_TYPE(DimensionMismatch);
DEPGEO_ERROR_TYPE(DegenerateAnchors);
DEPGEO_ERROR_TYPE(Unrealizable);
DEPGEO_ERROR_TYPE(NotCongruent);
DEPGEO_ERROR_TYPE(NotCommuting);
DEPGEO_ERROR_TYPE(DiagonalizationFailed);
DEPGEO_ERROR_TYPE(BadRates);
DEPGEO_ERROR_TYPE(DriftNotOrthogonal);
DEPGEO_ERROR_TYPE(TooManyPlanes);
DEPGEO_ERROR_TYPE(NegativeR);
DEPGEO_ERROR_TYPE(NoConvergence);
DEPGEO_ERROR_TYPE(Aliasing);
DEPGEO_ERROR_TYPE(TooFewSamples);
DEPGEO_ERROR_TYPE(MissingProducts);
DEPGEO_ERROR_TYPE(NotDegenerate);
DEPGEO_ERROR_TYPE(EmptyCarrier);

#undef DEPGEO_ERROR_TYPE

}  // namespace depgeo
