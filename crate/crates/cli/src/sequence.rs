//! Sequence specs: `const:c`, `id`, `pow:b`, `list:[a,b,…]`, `random:seed,max`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, CliResult};

/// Expands a spec to its first `len` terms (n_1, …, n_len).
pub fn sequence_spec(expr: &str, len: usize) -> CliResult<Vec<u64>> {
    let bad = |msg: String| CliError::Param(format!("sequence `{expr}`: {msg}"));
    let (form, arg) = expr.split_once(':').unwrap_or((expr, ""));
    let out: Vec<u64> = match form.trim() {
        "id" if arg.is_empty() => (1..=len as u64).collect(),
        "const" => {
            let c = positive(arg).map_err(bad)?;
            vec![c; len]
        }
        "pow" => {
            let b = positive(arg).map_err(bad)?;
            let mut v = Vec::with_capacity(len);
            let mut x = 1u64;
            for _ in 0..len {
                x = x
                    .checked_mul(b)
                    .ok_or_else(|| bad("terms overflow 64 bits".into()))?;
                v.push(x);
            }
            v
        }
        "list" => {
            let inner = arg
                .trim()
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| bad("expected list:[a,b,…]".into()))?;
            let v = inner
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(positive)
                .collect::<Result<Vec<_>, _>>()
                .map_err(bad)?;
            if v.len() < len {
                return Err(bad(format!("{} terms listed but {len} needed", v.len())));
            }
            v[..len].to_vec()
        }
        "random" => {
            let (seed, max) = arg
                .split_once(',')
                .ok_or_else(|| bad("expected random:seed,max".into()))?;
            let seed: u64 = seed
                .trim()
                .parse()
                .map_err(|_| bad(format!("seed `{seed}` is not an integer")))?;
            let max = positive(max).map_err(bad)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..len).map(|_| rng.gen_range(1..=max)).collect()
        }
        _ => {
            return Err(bad(
                "unknown form; use const:c, id, pow:b, list:[…] or random:seed,max".into(),
            ))
        }
    };
    Ok(out)
}

fn positive(s: &str) -> Result<u64, String> {
    match s.trim().parse::<u64>() {
        Ok(0) => Err("terms must be positive".into()),
        Ok(x) => Ok(x),
        Err(_) => Err(format!("`{}` is not a positive integer", s.trim())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(sequence_spec("pow:2", 4).unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(sequence_spec("id", 3).unwrap(), vec![1, 2, 3]);
        assert_eq!(sequence_spec("const:7", 2).unwrap(), vec![7, 7]);
        assert_eq!(
            sequence_spec("list:[3, 1,4,1,5]", 4).unwrap(),
            vec![3, 1, 4, 1]
        );
    }

    #[test]
    fn random_is_reproducible() {
        let a = sequence_spec("random:7,100", 5).unwrap();
        assert_eq!(a, sequence_spec("random:7,100", 5).unwrap());
        assert!(a.iter().all(|&x| (1..=100).contains(&x)));
        assert_ne!(a, sequence_spec("random:8,100", 5).unwrap());
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        for bad in ["fib", "pow:0", "list:[1,2]", "random:7", "const:x", "id:3"] {
            assert!(
                matches!(sequence_spec(bad, 3), Err(CliError::Param(_))),
                "{bad}"
            );
        }
    }
}
