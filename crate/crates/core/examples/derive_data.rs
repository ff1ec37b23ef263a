//! Prints the frozen theory data files from their derivations.

use shogi_reach::theory::{derive_init_to_kk, render_transfer_table};
use shogi_reach::{sfen, Variant};

fn main() {
    for v in Variant::ALL {
        println!("== {v} transfers");
        print!("{}", render_transfer_table(v));
    }
    let seq = derive_init_to_kk(Variant::Minishogi, 2_000_000).expect("line found");
    let text: Vec<String> = seq.iter().map(|&m| sfen::move_to_usi(Variant::Minishogi, m)).collect();
    println!("== minishogi init ({} plies)\n{}", seq.len(), text.join(" "));
}
