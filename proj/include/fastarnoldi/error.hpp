#pragma once

#include <stdexcept>
#include <string>

namespace fastarnoldi {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FASTARNOLDI_ERROR(Name)                      \
    class Name : public Error {                      \
    public:                                          \
        explicit Name(const std::string& what)       \
            : Error(#Name ": " + what) {}            \
    }

FASTARNOLDI_ERROR(DimensionMismatch);
FASTARNOLDI_ERROR(InvalidDimension);
FASTARNOLDI_ERROR(ZeroStartVector);
FASTARNOLDI_ERROR(BreakdownEncountered);
FASTARNOLDI_ERROR(NonpositiveSubdiagonal);
FASTARNOLDI_ERROR(IndexOutOfRange);
FASTARNOLDI_ERROR(SpecializationMismatch);
FASTARNOLDI_ERROR(SingularShift);
FASTARNOLDI_ERROR(SingularLink);
FASTARNOLDI_ERROR(SingularGeneratorSystem);
FASTARNOLDI_ERROR(NotUnitary);
FASTARNOLDI_ERROR(OutlierOnCircle);
FASTARNOLDI_ERROR(InvalidInterval);
FASTARNOLDI_ERROR(InvalidArgument);
FASTARNOLDI_ERROR(ConfigError);
FASTARNOLDI_ERROR(FileNotFound);
FASTARNOLDI_ERROR(CertificateInvalid);
FASTARNOLDI_ERROR(UnsupportedField);

#undef FASTARNOLDI_ERROR

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line)
        : Error("ParseError (line " + std::to_string(line) + "): " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

} // namespace fastarnoldi
