#pragma once

#include "cavlat/bunching.hpp"
#include "cavlat/mat2.hpp"
#include "cavlat/odm.hpp"
#include "cavlat/params.hpp"
#include "cavlat/spectrum.hpp"

#include <vector>

namespace cavlat {

// Relative populations of the sheets that split one lattice period when the
// atoms are thermally spread. Sheet m (1-based) sits m * site_phase / n_sub
// past the previous site, so sheet n_sub is the site itself. The weights are
// a periodic Gaussian of rms phase kzbar and sum to one.
std::vector<double> thermal_sublayer_weights(double kzbar, double site_phase, int n_sub);

// [A(beta1) P(period_phase)]^n_sites, or the sheet-resolved version when
// cfg.kzbar > 0. cfg.weights, if present, scale beta1 site by site.
Mat2 lattice_stack(const LatticeConfig& cfg, cplx beta1, double period_phase, int n_sub = 30);

// Standing-wave cavity: input mirror at z = 0, output mirror at z = length,
// lattice centered in between.
struct LinearLayout {
  LatticeConfig lattice;
  double length = 0.0;          // mirror separation, c / (2 fsr)
  double period = 0.0;          // lattice period lambda_lat / 2
  double k = 0.0;               // probe wavenumber
  double r_mir = 0.0;           // intensity reflectivity of each mirror
  double r_ls = 1.0;            // amplitude factor per pass
  double atoms_per_site = 0.0;  // N1
  double length_offset = 0.0;   // output mirror displacement
  int n_sublayers = 30;

  double gap() const { return 0.5 * (length - lattice.n_sites * period); }
  void validate() const;
};

LinearLayout make_linear_layout(const PhysParams& p, const DerivedParams& d, double site_phase,
                                double z0_phase = 0.0);

// One factor of the left-to-right transfer chain, occupying [z_begin, z_end].
// Sheets and mirrors have zero thickness.
struct ChainElement {
  enum class Kind { Mirror, Loss, Free, Sheet } kind = Kind::Free;
  Mat2 m;
  double z_begin = 0.0;
  double z_end = 0.0;
  double phase = 0.0;   // Free: accumulated phase
  double atoms = 0.0;   // Sheet: atom number carried
};

std::vector<ChainElement> linear_chain(const LinearLayout& layout, cplx beta_atom, double delta_c);

Mat2 chain_product(const std::vector<ChainElement>& chain);

// Scattering block of the whole chain, composed element by element.
SBlock chain_sblock(const std::vector<ChainElement>& chain);

// Amplitudes at the chain.size() + 1 element boundaries for incident
// amplitudes in_left (from the left) and in_right (from the right). Entry i
// lies just before element i.
std::vector<AmpPair> junction_fields(const std::vector<ChainElement>& chain, cplx in_left, cplx in_right);

struct LinearAssembly {
  Mat2 transfer;
  Mat2 scattering;
};

LinearAssembly assemble_linear(const LinearLayout& layout, cplx beta_atom, double delta_c);

SpectrumPoint spectrum_point_linear(const LinearLayout& layout, const DerivedParams& d,
                                    const DriveConfig& drive);

// Intracavity amplitudes for unit input from the left.
AmpPair field_at(const LinearLayout& layout, const DerivedParams& d, const DriveConfig& drive, double z);

struct ProfileSample {
  double z = 0.0;
  AmpPair field;
  double density = 0.0;   // atoms on a sheet at this point, else 0
};

// Fields at every element boundary, from the input to the output mirror.
std::vector<ProfileSample> intensity_profile(const LinearLayout& layout, const DerivedParams& d,
                                             const DriveConfig& drive);

// Fields at arbitrary points inside the cavity.
std::vector<ProfileSample> intensity_profile(const LinearLayout& layout, const DerivedParams& d,
                                             const DriveConfig& drive, const std::vector<double>& z);

struct SheetSample {
  double z = 0.0;
  double atoms = 0.0;
  AmpPair before;
  AmpPair after;

  double flux_drop() const { return before.flux() - after.flux(); }
  double overlap() const { return atoms * std::norm(before.sum()); }
};

// junctions as returned by junction_fields.
std::vector<SheetSample> sheet_samples(const std::vector<ChainElement>& chain,
                                       const std::vector<AmpPair>& junctions);
std::vector<SheetSample> linear_sheet_samples(const LinearLayout& layout, const DerivedParams& d,
                                              const DriveConfig& drive);

// Pearson correlation between the flux drop across each sheet and the
// population-weighted local intensity |a+ + a-|^2. Needs at least three
// sheets and nonzero variance in both.
double spont_check(const std::vector<SheetSample>& sheets);

struct RetuneResult {
  double offset = 0.0;        // output mirror displacement
  double transmission = 0.0;  // at the optimum
  bool flat = false;          // transmission independent of the offset
};

// Moves the output mirror within one half wavelength to maximize T.
RetuneResult retune_length(const LinearLayout& layout, const DerivedParams& d, const DriveConfig& drive);

}  // namespace cavlat
