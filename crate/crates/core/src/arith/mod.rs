pub mod bernoulli;
pub mod character;
pub mod constants;
pub mod enclosure;
pub mod exact;
pub mod gamma;
pub mod primes;
pub mod zeta;

pub use bernoulli::{bernoulli, bernoulli_upto};
pub use character::{gen_bernoulli, is_fundamental_discriminant, kronecker, l_value_exact, zeta_even_exact, QuadraticCharacter};
pub use constants::{
    constant_a, kellner_c, ln_glaisher, ln_two_pi, odd_prime_sum, prime_sum_constant, prime_sum_with_bound,
    wright_threshold, zeta_prime_minus_one,
};
pub use enclosure::{parse_exact, EnclosureJson, RealEnclosure};
pub use exact::ExactFactored;
pub use gamma::{gamma_half, gamma_half_product};
pub use primes::{first_primes, is_prime, primes_up_to};
pub use zeta::{euler_gamma, zeta_enclosure, zeta_prime_2};
