#pragma once

#include <stdexcept>
#include <string>

namespace dpres {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text or structurally invalid input object.
class ParseError : public Error {
public:
    using Error::Error;
};

// Input is well formed but violates an algorithm's precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Instance exceeds a configured enumeration cap.
class SizeCapError : public Error {
public:
    using Error::Error;
};

// A solver ran past its time limit.
class TimeoutError : public Error {
public:
    using Error::Error;
};

} // namespace dpres
