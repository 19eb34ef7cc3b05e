use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dme32::attack::{full_attack, AttackError};
use dme32::dme::formats::{
    read_params, read_private_key, read_public_key, read_vector, write_params, write_private_key,
    write_public_key, write_vector, FormatError,
};
use dme32::dme::{
    decrypt, derive_public_key, eval_public, gen_system_params, keygen, Preset, SystemParams,
};
use dme32::fields::FqElem;
use dme32::malleability::same_public_key;

#[derive(Parser)]
#[command(
    name = "dme32",
    version,
    about = "DME-(3,2,q) encryption and key recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Nist,
}

#[derive(Subcommand)]
enum Command {
    /// Generate system parameters (tower, E, F).
    GenParams {
        #[arg(short = 'w', long = "width", required_unless_present = "preset")]
        width: Option<u32>,
        #[arg(long, required_unless_present = "preset")]
        seed: Option<u64>,
        #[arg(long, value_enum, conflicts_with_all = ["width", "seed"])]
        preset: Option<PresetArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a random private key.
    Keygen {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive the public key of a private key.
    Pubkey {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encrypt a six-element plaintext with the public key.
    Encrypt {
        #[arg(long)]
        params: PathBuf,
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decrypt a ciphertext with the private key.
    Decrypt {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover an equivalent private key from a public key.
    Attack {
        #[arg(long)]
        params: PathBuf,
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Where to write the recovered key.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check whether two private keys have the same public key.
    VerifyEquiv {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, num_args = 2, value_names = ["KEY1", "KEY2"])]
        key: Vec<PathBuf>,
    },
}

enum Failure {
    Io(String),
    Parse(String),
    Domain(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Parse(_) => 3,
            Failure::Domain(_) => 4,
            Failure::Verification(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Parse(m) | Failure::Domain(m) | Failure::Verification(m) => m,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parsed<T>(path: &Path, r: Result<T, FormatError>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_params(path: &Path) -> Result<SystemParams, Failure> {
    parsed(path, read_params(&read(path)?))
}

fn has_zero_block(v: &[FqElem; 6]) -> bool {
    v.chunks(2).any(|b| b.iter().all(|x| x.is_zero()))
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::GenParams {
            width,
            seed,
            preset,
            out,
        } => {
            let params = match preset {
                Some(PresetArg::Nist) => gen_system_params(48, 0, Some(Preset::Nist)),
                None => {
                    let w = width.expect("required by clap");
                    if !(3..=64).contains(&w) {
                        return Err(Failure::Domain(format!("width {w} outside 3..=64")));
                    }
                    gen_system_params(w, seed.expect("required by clap"), None)
                }
            };
            emit(out.as_deref(), &write_params(&params))
        }
        Command::Keygen { params, seed, out } => {
            let p = load_params(&params)?;
            emit(out.as_deref(), &write_private_key(&keygen(&p, seed), p.w()))
        }
        Command::Pubkey { params, key, out } => {
            let p = load_params(&params)?;
            let sk = parsed(&key, read_private_key(&read(&key)?, &p))?;
            emit(
                out.as_deref(),
                &write_public_key(&derive_public_key(&sk, &p), p.w()),
            )
        }
        Command::Encrypt {
            params,
            public,
            input,
            out,
        } => {
            let p = load_params(&params)?;
            let pk = parsed(&public, read_public_key(&read(&public)?, &p))?;
            let m = parsed(&input, read_vector(&read(&input)?, p.w()))?;
            if has_zero_block(&m) {
                return Err(Failure::Domain("plaintext has a zero block".into()));
            }
            emit(
                out.as_deref(),
                &write_vector(&eval_public(&pk, &p, &m), p.w()),
            )
        }
        Command::Decrypt {
            params,
            key,
            input,
            out,
        } => {
            let p = load_params(&params)?;
            let sk = parsed(&key, read_private_key(&read(&key)?, &p))?;
            let c = parsed(&input, read_vector(&read(&input)?, p.w()))?;
            let m = decrypt(&sk, &p, &c).map_err(|e| Failure::Domain(e.to_string()))?;
            emit(out.as_deref(), &write_vector(&m, p.w()))
        }
        Command::Attack {
            params,
            public,
            workers,
            out,
        } => {
            let p = load_params(&params)?;
            let pk = parsed(&public, read_public_key(&read(&public)?, &p))?;
            let (key, report) = full_attack(&pk, &p, workers).map_err(|e| match e {
                AttackError::VerificationFailed => Failure::Verification(e.to_string()),
                e => Failure::Domain(format!("attack failed: {e}")),
            })?;
            let key_text = write_private_key(&key, p.w());
            emit(out.as_deref(), &key_text)?;
            let name = out
                .as_ref()
                .map_or("-".to_string(), |o| o.display().to_string());
            println!("{report}");
            println!("{}", report.machine_line(&name));
            Ok(())
        }
        Command::VerifyEquiv { params, key } => {
            let p = load_params(&params)?;
            let keys = key
                .iter()
                .map(|k| parsed(k, read_private_key(&read(k)?, &p)))
                .collect::<Result<Vec<_>, _>>()?;
            if same_public_key(&keys[0], &keys[1], &p) {
                println!("equivalent");
                Ok(())
            } else {
                Err(Failure::Verification(
                    "keys have different public keys".into(),
                ))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
