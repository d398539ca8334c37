#pragma once

#include "padicspec/arith.hpp"
#include "padicspec/padic.hpp"
#include "padicspec/cyclotomic.hpp"
#include "padicspec/set_model.hpp"
#include "padicspec/dsl.hpp"
#include "padicspec/cyclic_group.hpp"
#include "padicspec/construct_verify.hpp"
#include "padicspec/measures.hpp"
#include "padicspec/serialize.hpp"
