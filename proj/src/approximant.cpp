#include "rdv/util.hpp"
