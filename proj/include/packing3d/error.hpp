#pragma once

#include <stdexcept>
#include <string>

namespace packing3d {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// an operation was called outside its documented domain
class PreconditionError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// LP or assignment has no feasible point
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// exact search refused because the instance exceeds a size cap
class CapExceededError : public Error {
public:
    using Error::Error;
};

}  // namespace packing3d
