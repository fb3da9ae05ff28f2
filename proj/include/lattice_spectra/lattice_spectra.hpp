#ifndef LATTICE_SPECTRA_LATTICE_SPECTRA_HPP
#define LATTICE_SPECTRA_LATTICE_SPECTRA_HPP

#include "common.hpp"
#include "constraints.hpp"
#include "continuum.hpp"
#include "freecase.hpp"
#include "hamiltonian.hpp"
#include "io.hpp"
#include "multiprecision.hpp"
#include "polynomial.hpp"
#include "scattering.hpp"

#endif
