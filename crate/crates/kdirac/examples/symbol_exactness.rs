//! Principal symbols at a covector: consecutive symbols multiply to zero and
//! the rank profile certifies exactness of the symbol sequence at every node.
//!
//! Run with: cargo run --example symbol_exactness

use kdirac::scalar::FieldScalar;
use kdirac::sequences::{covector_rows, node_symbols, symbol_matrix, Edition, OperatorSet};

fn covector(coords: &[&[i64]], n: u16) -> Vec<kdirac::clifford::CliffordElement> {
    let m = u32::from(n) + 2;
    let rows: Vec<Vec<FieldScalar>> = coords
        .iter()
        .map(|row| row.iter().map(|&v| FieldScalar::from_int(v, m)).collect())
        .collect();
    covector_rows(&rows, n)
}

fn main() {
    // k = 2 at n = 4: one covector row per slot, realized as Clifford vectors.
    let set = OperatorSet::new(2, 4, Edition::Given).unwrap();
    let xi = covector(&[&[1, 2, 0, -1], &[0, 1, 1, 3]], 4);

    let symbols: Vec<_> = (1..=set.len()).map(|i| symbol_matrix(set.op(i), &xi)).collect();
    for pair in symbols.windows(2) {
        let prod = pair[1].mul(&pair[0]);
        println!("{} * {} = 0: {}", pair[1].name, pair[0].name, prod.is_zero());
    }
    let nodes = node_symbols(&set, &xi);
    let ranks: Vec<usize> = nodes.iter().map(|s| s.rank()).collect();
    println!("k=2 node map ranks: {ranks:?} (each node has dimension 16 or 32)");

    // k = 3 at n = 6: the sequence branches, so the node maps stack the
    // parallel symbols.  Exactness at a node means incoming rank plus
    // outgoing rank equals the node dimension.
    let set = OperatorSet::new(3, 6, Edition::Amended).unwrap();
    let xi = covector(&[&[1, 0, 2, -1, 1, 0], &[0, 1, -1, 2, 0, 1], &[2, 1, 0, 0, -1, 1]], 6);
    let nodes = node_symbols(&set, &xi);
    let ranks: Vec<usize> = nodes.iter().map(|s| s.rank()).collect();
    let dims = [64, 192, 512, 768, 512, 192, 64];
    println!("k=3 node map ranks: {ranks:?}");
    for i in 1..dims.len() - 1 {
        println!(
            "  node {}: rank in {} + rank out {} = {} (dimension {})",
            i,
            ranks[i - 1],
            ranks[i],
            ranks[i - 1] + ranks[i],
            dims[i]
        );
    }

    // With the tables as transcribed, the middle products fail and the ranks
    // drift away from the exact profile.
    let given = OperatorSet::new(3, 6, Edition::Given).unwrap();
    let nodes = node_symbols(&given, &xi);
    let ranks: Vec<usize> = nodes.iter().map(|s| s.rank()).collect();
    println!("same covector, tables as transcribed: {ranks:?}");
}
