//! Balance sheets of the five-bank network, with uniform and skewed
//! allocations of assets.

use contagion::fixtures;
use contagion::io::balance_csv;

fn main() {
    println!("uniform loans and external assets:");
    print!("{}", balance_csv(&fixtures::five_banks_uniform()).unwrap());

    println!("\n95% of E on v1 and v2, 95% of I on three loans:");
    print!("{}", balance_csv(&fixtures::five_banks_skewed()).unwrap());
}
