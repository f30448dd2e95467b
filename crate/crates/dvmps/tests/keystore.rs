use dvmps::keystore::{self, Kdf, KeyRole, KeystoreError};
use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

const FAST: Kdf = Kdf { iterations: 1_000 };

fn rng() -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(5)
}

#[test]
fn save_then_load_returns_material() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.key");
    keystore::save(
        &path,
        "toy",
        KeyRole::User,
        b"secret bytes",
        Some("pw"),
        FAST,
        &mut rng(),
    )
    .unwrap();
    let raw = std::fs::read(&path).unwrap();
    assert!(!raw.windows(12).any(|w| w == b"secret bytes"));
    assert_eq!(
        keystore::load(&path, "toy", KeyRole::User, Some("pw")).unwrap(),
        b"secret bytes"
    );

    keystore::save(
        &path,
        "demo",
        KeyRole::Params,
        b"public",
        None,
        FAST,
        &mut rng(),
    )
    .unwrap();
    assert_eq!(
        keystore::load(&path, "demo", KeyRole::Params, None).unwrap(),
        b"public"
    );
}

#[test]
fn wrong_passphrase_is_an_authentication_error() {
    let sealed = keystore::seal(
        "toy",
        KeyRole::Master,
        b"m",
        Some("right"),
        FAST,
        &mut rng(),
    );
    assert!(matches!(
        keystore::open(&sealed, "toy", KeyRole::Master, Some("wrong")),
        Err(KeystoreError::WrongPassphrase)
    ));
    assert!(matches!(
        keystore::open(&sealed, "toy", KeyRole::Master, None),
        Err(KeystoreError::PassphraseRequired)
    ));
}

#[test]
fn altered_magic_is_rejected() {
    let mut sealed = keystore::seal("toy", KeyRole::User, b"m", None, FAST, &mut rng());
    sealed[0] ^= 1;
    assert!(matches!(
        keystore::open(&sealed, "toy", KeyRole::User, None),
        Err(KeystoreError::BadMagic)
    ));
    assert!(matches!(
        keystore::open(b"DVM", "toy", KeyRole::User, None),
        Err(KeystoreError::BadMagic)
    ));
}

#[test]
fn header_mismatches_are_reported() {
    let sealed = keystore::seal("toy", KeyRole::User, b"m", None, FAST, &mut rng());
    assert!(matches!(
        keystore::open(&sealed, "demo", KeyRole::User, None),
        Err(KeystoreError::ParamMismatch { .. })
    ));
    assert!(matches!(
        keystore::open(&sealed, "toy", KeyRole::Master, None),
        Err(KeystoreError::RoleMismatch { .. })
    ));
}

#[test]
fn tampered_header_fails_authentication() {
    let mut sealed = keystore::seal(
        "toy",
        KeyRole::User,
        b"material",
        Some("pw"),
        FAST,
        &mut rng(),
    );
    // magic, lp(set), role, lp(kdf), iterations, salt
    let salt_end = 6 + 4 + 3 + 1 + 4 + "pbkdf2-sha256".len() + 4 + 16;
    sealed[salt_end - 1] ^= 0x80;
    assert!(matches!(
        keystore::open(&sealed, "toy", KeyRole::User, Some("pw")),
        Err(KeystoreError::WrongPassphrase)
    ));
}

#[test]
fn truncated_file_is_a_decode_error() {
    let sealed = keystore::seal("toy", KeyRole::User, b"material", None, FAST, &mut rng());
    for cut in 6..sealed.len() {
        assert!(matches!(
            keystore::open(&sealed[..cut], "toy", KeyRole::User, None),
            Err(KeystoreError::Decode(_))
        ));
    }
}

#[test]
fn sealing_is_reproducible_from_the_rng() {
    let a = keystore::seal("toy", KeyRole::User, b"m", Some("pw"), FAST, &mut rng());
    let b = keystore::seal("toy", KeyRole::User, b"m", Some("pw"), FAST, &mut rng());
    assert_eq!(a, b);
}
