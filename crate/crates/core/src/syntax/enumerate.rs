use rand::Rng;

use super::{Signature, Term};

fn leaves(sig: &Signature) -> Vec<Term> {
    std::iter::once(Term::Zero)
        .chain((1..=sig.extra_constants()).map(Term::Const))
        .collect()
}

/// Closed terms with exactly `size` nodes, grouped by size for reuse.
fn layers(sig: &Signature, size: usize) -> Vec<Vec<Term>> {
    let mut layers: Vec<Vec<Term>> = vec![Vec::new(), leaves(sig)];
    for n in 2..=size {
        let mut layer = Vec::new();
        layer.extend(layers[n - 1].iter().cloned().map(Term::succ));
        for ctor in [Term::add as fn(Term, Term) -> Term, Term::mul] {
            for left in 1..=n.saturating_sub(2) {
                let right = n - 1 - left;
                for l in &layers[left] {
                    for r in &layers[right] {
                        layer.push(ctor(l.clone(), r.clone()));
                    }
                }
            }
        }
        layers.push(layer);
    }
    layers
}

/// Every closed term with exactly `size` nodes, in enumeration order.
pub fn closed_terms_of_size(sig: &Signature, size: usize) -> Vec<Term> {
    if size == 0 {
        return Vec::new();
    }
    layers(sig, size).pop().unwrap_or_default()
}

/// Every closed term with at most `size` nodes, each exactly once.
///
/// Ordered by size, then by constructor (leaves, `S`, `+`, `*`), then by
/// the split point and the order of the operands. The output for `size`
/// is therefore a prefix of the output for `size + 1`.
pub fn closed_terms_upto(sig: &Signature, size: usize) -> Vec<Term> {
    if size == 0 {
        return Vec::new();
    }
    layers(sig, size).into_iter().flatten().collect()
}

/// A random closed term with at most `max_size` nodes.
pub fn random_closed_term<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, max_size: usize) -> Term {
    let budget = rng.random_range(1..=max_size.max(1));
    grow(rng, sig, budget)
}

fn grow<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, budget: usize) -> Term {
    if budget <= 1 {
        let k = sig.extra_constants();
        return match rng.random_range(0..=k) {
            0 => Term::Zero,
            i => Term::Const(i),
        };
    }
    if budget == 2 || rng.random_bool(0.3) {
        return Term::succ(grow(rng, sig, budget - 1));
    }
    let left = rng.random_range(1..=budget - 2);
    let l = grow(rng, sig, left);
    let r = grow(rng, sig, budget - 1 - left);
    if rng.random_bool(0.5) {
        Term::add(l, r)
    } else {
        Term::mul(l, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smallest_sizes() {
        let sig = Signature::arithmetic();
        assert_eq!(closed_terms_upto(&sig, 1), vec![Term::Zero]);
        assert_eq!(closed_terms_upto(&sig, 2), vec![Term::Zero, Term::numeral(1)]);
        assert!(closed_terms_upto(&sig, 0).is_empty());
    }

    #[test]
    fn random_terms_respect_bounds() {
        let sig = Signature::extended(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let t = random_closed_term(&mut rng, &sig, 12);
            assert!(t.size() <= 12);
            assert!(t.is_closed());
            assert!(sig.admits_term(&t));
        }
    }
}
