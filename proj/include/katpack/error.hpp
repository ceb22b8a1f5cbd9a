/*
katpack

Copyright 2026 The katpack authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <exception>
#include <string>
#include <vector>

namespace katpack
{

/** @brief Base class for all katpack errors */
class Error : public std::exception
{
public:
    explicit Error(std::string msg) : msg_{std::move(msg)} {}
    const char* what() const noexcept override { return msg_.c_str(); }

private:
    std::string msg_;
};

#define KATPACK_ERROR(Name)                                                    \
    class Name : public Error                                                  \
    {                                                                          \
    public:                                                                    \
        explicit Name(std::string msg) : Error(#Name ": " + std::move(msg)) {} \
    }

// complex
KATPACK_ERROR(NonManifold);
KATPACK_ERROR(OrientationInconsistent);
KATPACK_ERROR(NotSimplicial);
KATPACK_ERROR(ResultNotSimplicial);
KATPACK_ERROR(NotPolyhedral);
KATPACK_ERROR(InvalidInput);

// geom
KATPACK_ERROR(NoTriangleDatum);
KATPACK_ERROR(DegenerateTriangle);
KATPACK_ERROR(CoincidentCircles);
KATPACK_ERROR(DiskDisjoint);

// layout
KATPACK_ERROR(LayoutInconsistent);

// refine
KATPACK_ERROR(TooCoarse);
KATPACK_ERROR(SizeBudgetExceeded);

// typelab
KATPACK_ERROR(DisconnectedSets);
KATPACK_ERROR(CardinalityViolation);

#undef KATPACK_ERROR

/** Solver ran into radii collapsing to zero; carries the offending vertices */
class Infeasible : public Error
{
public:
    Infeasible(std::string msg, std::vector<int> set)
        : Error("Infeasible: " + std::move(msg)), vertices(std::move(set))
    {
    }
    std::vector<int> vertices;
};

class NonConvergence : public Error
{
public:
    explicit NonConvergence(std::string msg)
        : Error("NonConvergence: " + std::move(msg))
    {
    }
};

}  // namespace katpack
