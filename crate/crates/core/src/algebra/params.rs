//! Built-in DEMO parameters.
//!
//! Produced by `primes::generate_supersingular_params(ChaCha20(DEMO_SEED), 512, 160)`;
//! a test regenerates them from the seed.

pub const DEMO_SEED: [u8; 32] = *b"dvmps demo parameter set, v1....";
pub const DEMO_P_BITS: usize = 512;
pub const DEMO_Q_BITS: usize = 160;

pub(crate) const DEMO_P: &str = "d9472d90d2c2137da936cb7df1858f891468e7f302702977fe4acd3b4486cda9\
                                 2cb78e1a5d8d254ddbcc1f2ed69db524a16335b88b8d1ea2299d5086d15d9fe7";
pub(crate) const DEMO_Q: &str = "c3c64afd13a31edb02bfb877159dda678d0e0ecb";
pub(crate) const DEMO_COFACTOR: &str = "11c1e552d08944abd7524aca529a09fdc1f4676473a086d59643836b\
                                        4f8f8025d286ce53e94c9dee7819b3ab8";
