#pragma once

#include "purepairs/bigrade.hpp"
#include "purepairs/bilevel.hpp"
#include "purepairs/check.hpp"
#include "purepairs/exact.hpp"
#include "purepairs/expansion.hpp"
#include "purepairs/levelling.hpp"
#include "purepairs/selective.hpp"
