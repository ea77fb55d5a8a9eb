//! Dataset serialization: a self-contained binary record per example, a
//! deterministic train/val/test directory tree with a manifest, and the
//! statistics reader.
//!
//! Record layout (all little-endian): magic `NSTP`, format version, the
//! per-type feature tables (rows x cols of f32), the per-type edge index
//! lists (u32 row pairs), the target marker and the 12x2 future matrix.
//! Features are stored as f32; geometry stays f64 in memory.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::Config;
use crate::extract::{feature_columns, index_tables, ExtractedExample, FeatureTable, HetGraphExample};
use crate::scene_ir::{Split, SplitTable};

const MAGIC: &[u8; 4] = b"NSTP";
const FORMAT_VERSION: u32 = 1;
pub const RECORD_EXT: &str = "nstp";

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("io: {0}")]
    Io(#[from] io::Error),
    #[error("record parse error at byte {offset}: {message}")]
    Record { offset: u64, message: String },
    #[error("sequence '{0}' has no split assignment")]
    MissingSplit(String),
    #[error("manifest error: {0}")]
    Manifest(String),
}

struct CountingReader<R> {
    inner: R,
    offset: u64,
}

impl<R: Read> CountingReader<R> {
    fn new(inner: R) -> Self {
        Self { inner, offset: 0 }
    }

    fn fail(&self, message: impl Into<String>) -> DatasetError {
        DatasetError::Record { offset: self.offset, message: message.into() }
    }
}

impl<R: Read> Read for CountingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.offset += n as u64;
        Ok(n)
    }
}

fn map_eof(offset: u64, e: io::Error) -> DatasetError {
    if e.kind() == io::ErrorKind::UnexpectedEof {
        DatasetError::Record { offset, message: "unexpected end of record".into() }
    } else {
        DatasetError::Io(e)
    }
}

fn write_str<W: Write>(w: &mut W, s: &str) -> io::Result<u64> {
    w.write_u16::<LittleEndian>(s.len() as u16)?;
    w.write_all(s.as_bytes())?;
    Ok(2 + s.len() as u64)
}

fn read_str<R: Read>(r: &mut CountingReader<R>) -> Result<String, DatasetError> {
    let len = r.read_u16::<LittleEndian>().map_err(|e| map_eof(r.offset, e))? as usize;
    let mut buf = vec![0u8; len];
    r.read_exact(&mut buf).map_err(|e| map_eof(r.offset, e))?;
    String::from_utf8(buf).map_err(|_| r.fail("string is not UTF-8"))
}

/// Write one example; returns the number of bytes written.
pub fn write_example<W: Write>(ex: &HetGraphExample, w: &mut W) -> Result<u64, DatasetError> {
    let mut n: u64 = 0;
    w.write_all(MAGIC)?;
    n += 4;
    w.write_u32::<LittleEndian>(FORMAT_VERSION)?;
    n += 4;

    w.write_u32::<LittleEndian>(ex.nodes.len() as u32)?;
    n += 4;
    for (key, table) in &ex.nodes {
        n += write_str(w, key)?;
        w.write_u32::<LittleEndian>(table.rows)?;
        w.write_u32::<LittleEndian>(table.cols)?;
        n += 8;
        for v in &table.data {
            w.write_f32::<LittleEndian>(*v as f32)?;
        }
        n += 4 * table.data.len() as u64;
    }

    w.write_u32::<LittleEndian>(ex.edges.len() as u32)?;
    n += 4;
    for ((src, rel, dst), pairs) in &ex.edges {
        n += write_str(w, src)?;
        n += write_str(w, rel)?;
        n += write_str(w, dst)?;
        w.write_u32::<LittleEndian>(pairs.len() as u32)?;
        n += 4;
        for [a, b] in pairs {
            w.write_u32::<LittleEndian>(*a)?;
            w.write_u32::<LittleEndian>(*b)?;
        }
        n += 8 * pairs.len() as u64;
    }

    n += write_str(w, &ex.target.0)?;
    w.write_u32::<LittleEndian>(ex.target.1)?;
    n += 4;

    w.write_u32::<LittleEndian>(ex.y.len() as u32)?;
    w.write_u32::<LittleEndian>(2)?;
    n += 8;
    for row in &ex.y {
        w.write_f32::<LittleEndian>(row[0] as f32)?;
        w.write_f32::<LittleEndian>(row[1] as f32)?;
        n += 8;
    }
    Ok(n)
}

/// Read one example back. Stored f32 features widen to f64 exactly, so
/// read(write(ex)) equals `ex.quantized()`.
pub fn read_example<R: Read>(reader: R) -> Result<HetGraphExample, DatasetError> {
    let mut r = CountingReader::new(reader);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(|e| map_eof(r.offset, e))?;
    if &magic != MAGIC {
        return Err(r.fail("bad magic, not a record file"));
    }
    let version = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
    if version != FORMAT_VERSION {
        return Err(r.fail(format!("unsupported record version {version}")));
    }

    let n_tables = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
    let mut nodes = BTreeMap::new();
    for _ in 0..n_tables {
        let key = read_str(&mut r)?;
        let rows = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
        let cols = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
        let count = rows as usize * cols as usize;
        if count > 1 << 28 {
            return Err(r.fail("implausible table size"));
        }
        let mut data = Vec::with_capacity(count);
        for _ in 0..count {
            data.push(r.read_f32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))? as f64);
        }
        nodes.insert(key, FeatureTable { cols, rows, data });
    }

    let n_edges = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
    let mut edges = BTreeMap::new();
    for _ in 0..n_edges {
        let src = read_str(&mut r)?;
        let rel = read_str(&mut r)?;
        let dst = read_str(&mut r)?;
        let count = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))? as usize;
        if count > 1 << 28 {
            return Err(r.fail("implausible edge count"));
        }
        let mut pairs = Vec::with_capacity(count);
        for _ in 0..count {
            let a = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
            let b = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
            pairs.push([a, b]);
        }
        edges.insert((src, rel, dst), pairs);
    }

    let target_key = read_str(&mut r)?;
    let target_row = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;

    let y_rows = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
    let y_cols = r.read_u32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))?;
    if y_cols != 2 {
        return Err(r.fail(format!("future matrix must have 2 columns, got {y_cols}")));
    }
    let mut y = Vec::with_capacity(y_rows as usize);
    for _ in 0..y_rows {
        let a = r.read_f32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))? as f64;
        let b = r.read_f32::<LittleEndian>().map_err(|e| map_eof(r.offset, e))? as f64;
        y.push([a, b]);
    }

    Ok(HetGraphExample { nodes, edges, target: (target_key, target_row), y })
}

// ---------------------------------------------------------------------------
// Feature schema and manifest
// ---------------------------------------------------------------------------

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FeatureSchema {
    pub version: String,
    pub columns: BTreeMap<String, Vec<String>>,
    pub index_tables: BTreeMap<String, Vec<String>>,
}

pub fn feature_schema() -> FeatureSchema {
    FeatureSchema {
        version: SCHEMA_VERSION.to_string(),
        columns: feature_columns(),
        index_tables: index_tables(),
    }
}

impl FeatureSchema {
    /// Content digest over the canonical JSON form.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("schema serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub config: Config,
    pub split_counts: BTreeMap<String, u64>,
    pub feature_schema: FeatureSchema,
    pub feature_schema_digest: String,
}

pub fn record_file_name(meta: &crate::extract::ExampleMeta) -> String {
    fn safe(s: &str) -> String {
        s.chars().map(|c| if c.is_alphanumeric() || c == '-' || c == '_' { c } else { '-' }).collect()
    }
    format!("{}_{}_{:04}.{RECORD_EXT}", safe(&meta.sequence), safe(&meta.target), meta.anchor_index)
}

/// Write the dataset tree: `train/`, `val/`, `test/` with one record per
/// example and `manifest.json` at the root. Deterministic: same examples
/// and splits give a byte-identical tree.
pub fn write_dataset(
    examples: &[ExtractedExample],
    splits: &SplitTable,
    dir: &Path,
    cfg: &Config,
) -> Result<DatasetManifest, DatasetError> {
    for ex in examples {
        if splits.get(&ex.meta.sequence).is_none() {
            return Err(DatasetError::MissingSplit(ex.meta.sequence.clone()));
        }
    }
    for split in Split::ALL {
        fs::create_dir_all(dir.join(split.dir_name()))?;
    }

    let mut split_counts: BTreeMap<String, u64> = BTreeMap::new();
    for split in Split::ALL {
        split_counts.insert(split.dir_name().to_string(), 0);
    }
    for ex in examples {
        let split = splits.get(&ex.meta.sequence).expect("checked above");
        let path = dir.join(split.dir_name()).join(record_file_name(&ex.meta));
        let mut file = io::BufWriter::new(fs::File::create(&path)?);
        write_example(&ex.example, &mut file)?;
        file.flush()?;
        *split_counts.get_mut(split.dir_name()).expect("initialized") += 1;
    }

    let schema = feature_schema();
    let manifest = DatasetManifest {
        format_version: FORMAT_VERSION,
        config: cfg.clone(),
        split_counts,
        feature_schema_digest: schema.digest(),
        feature_schema: schema,
    };
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(dir.join("manifest.json"), json + "\n")?;
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<DatasetManifest, DatasetError> {
    let text = fs::read_to_string(dir.join("manifest.json"))?;
    let manifest: DatasetManifest =
        serde_json::from_str(&text).map_err(|e| DatasetError::Manifest(e.to_string()))?;
    if manifest.feature_schema.digest() != manifest.feature_schema_digest {
        return Err(DatasetError::Manifest("feature schema digest mismatch".into()));
    }
    Ok(manifest)
}

// ---------------------------------------------------------------------------
// Dataset statistics
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default, Serialize)]
pub struct SplitStats {
    pub examples: u64,
    pub corrupt: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DatasetStats {
    pub per_split: BTreeMap<String, SplitStats>,
    pub examples_total: u64,
    pub corrupt_total: u64,
    pub node_count_min: u64,
    pub node_count_max: u64,
    pub node_count_mean: f64,
    /// Histogram of total node counts, bucketed by 100.
    pub node_count_histogram: BTreeMap<u64, u64>,
    /// Mean node count per type over readable examples.
    pub per_type_mean: BTreeMap<String, f64>,
}

impl std::fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "examples: {} (corrupt: {})", self.examples_total, self.corrupt_total)?;
        for (split, s) in &self.per_split {
            writeln!(f, "  {split}: {}", s.examples)?;
            for c in &s.corrupt {
                writeln!(f, "    corrupt: {c}")?;
            }
        }
        if self.examples_total > 0 {
            writeln!(
                f,
                "nodes per example: min {} mean {:.1} max {}",
                self.node_count_min, self.node_count_mean, self.node_count_max
            )?;
            for (bucket, count) in &self.node_count_histogram {
                writeln!(f, "  [{}, {}): {count}", bucket, bucket + 100)?;
            }
            writeln!(f, "mean nodes per type:")?;
            for (ty, mean) in &self.per_type_mean {
                writeln!(f, "  {ty}: {mean:.2}")?;
            }
        }
        Ok(())
    }
}

/// Walk the dataset tree and aggregate statistics. Corrupt records are
/// listed and skipped; everything else is still counted.
pub fn dataset_stats(dir: &Path) -> Result<DatasetStats, DatasetError> {
    let mut stats = DatasetStats {
        node_count_min: u64::MAX,
        ..Default::default()
    };
    let mut type_sums: BTreeMap<String, u64> = BTreeMap::new();
    let mut node_counts: Vec<u64> = Vec::new();

    for split in Split::ALL {
        let split_dir = dir.join(split.dir_name());
        let mut split_stats = SplitStats::default();
        if split_dir.is_dir() {
            let mut paths: Vec<PathBuf> = fs::read_dir(&split_dir)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().map(|e| e == RECORD_EXT).unwrap_or(false))
                .collect();
            paths.sort();
            for path in paths {
                let file = fs::File::open(&path)?;
                match read_example(io::BufReader::new(file)) {
                    Ok(ex) => {
                        split_stats.examples += 1;
                        let total = ex.node_total();
                        node_counts.push(total);
                        for (key, table) in &ex.nodes {
                            *type_sums.entry(key.clone()).or_insert(0) += table.rows as u64;
                        }
                    }
                    Err(_) => {
                        split_stats
                            .corrupt
                            .push(path.file_name().unwrap_or_default().to_string_lossy().into());
                    }
                }
            }
        }
        stats.examples_total += split_stats.examples;
        stats.corrupt_total += split_stats.corrupt.len() as u64;
        stats.per_split.insert(split.dir_name().to_string(), split_stats);
    }

    if node_counts.is_empty() {
        stats.node_count_min = 0;
    } else {
        let sum: u64 = node_counts.iter().sum();
        stats.node_count_mean = sum as f64 / node_counts.len() as f64;
        for &c in &node_counts {
            stats.node_count_min = stats.node_count_min.min(c);
            stats.node_count_max = stats.node_count_max.max(c);
            *stats.node_count_histogram.entry((c / 100) * 100).or_insert(0) += 1;
        }
        for (ty, sum) in type_sums {
            stats.per_type_mean.insert(ty, sum as f64 / node_counts.len() as f64);
        }
    }
    Ok(stats)
}

/// SHA-256 over every file in the tree (sorted relative paths + contents);
/// used by the determinism checks.
pub fn tree_digest(dir: &Path) -> Result<String, DatasetError> {
    fn walk(dir: &Path, base: &Path, out: &mut Vec<PathBuf>) -> io::Result<()> {
        let mut entries: Vec<PathBuf> =
            fs::read_dir(dir)?.filter_map(|e| e.ok().map(|e| e.path())).collect();
        entries.sort();
        for entry in entries {
            if entry.is_dir() {
                walk(&entry, base, out)?;
            } else {
                out.push(entry);
            }
        }
        Ok(())
    }
    let mut files = Vec::new();
    walk(dir, dir, &mut files)?;
    let mut hasher = Sha256::new();
    for file in files {
        let rel = file.strip_prefix(dir).unwrap_or(&file);
        hasher.update(rel.to_string_lossy().as_bytes());
        hasher.update([0u8]);
        hasher.update(fs::read(&file)?);
    }
    Ok(hasher.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::ExampleMeta;

    fn tiny_example() -> HetGraphExample {
        let mut nodes = BTreeMap::new();
        nodes.insert(
            "SceneParticipant".to_string(),
            FeatureTable {
                cols: 6,
                rows: 1,
                data: vec![0.0, 0.0, 0.0, 3.25, 0.0, 1.0],
            },
        );
        nodes.insert(
            "Scene".to_string(),
            FeatureTable { cols: 1, rows: 1, data: vec![0.0] },
        );
        nodes.insert(
            "Sequence".to_string(),
            FeatureTable { cols: 0, rows: 1, data: vec![] },
        );
        let mut edges = BTreeMap::new();
        edges.insert(
            ("Scene".to_string(), "hasSceneParticipant".to_string(), "SceneParticipant".to_string()),
            vec![[0u32, 0u32]],
        );
        HetGraphExample {
            nodes,
            edges,
            target: ("SceneParticipant".to_string(), 0),
            y: (1..=12).map(|k| [2.0 * k as f64, 0.0]).collect(),
        }
    }

    #[test]
    fn minimal_example_roundtrips() {
        let ex = tiny_example();
        let mut buf = Vec::new();
        let n = write_example(&ex, &mut buf).unwrap();
        assert_eq!(n, buf.len() as u64);
        let back = read_example(buf.as_slice()).unwrap();
        assert_eq!(back, ex.quantized());
        assert_eq!(back, ex); // all values here are f32-exact
    }

    #[test]
    fn truncated_record_is_a_positioned_error() {
        let ex = tiny_example();
        let mut buf = Vec::new();
        write_example(&ex, &mut buf).unwrap();
        let cut = &buf[..buf.len() / 2];
        match read_example(cut).unwrap_err() {
            DatasetError::Record { offset, .. } => assert!(offset > 0 && offset <= cut.len() as u64),
            other => panic!("expected record error, got {other:?}"),
        }
        // garbage magic
        assert!(matches!(
            read_example(&b"GARBAGE!"[..]).unwrap_err(),
            DatasetError::Record { .. }
        ));
    }

    fn meta(seq: &str, k: usize) -> ExampleMeta {
        ExampleMeta {
            sequence: seq.to_string(),
            target: "agent_1".to_string(),
            anchor_scene: format!("{seq}_t{k}"),
            anchor_index: k,
        }
    }

    #[test]
    fn dataset_tree_layout_and_counts() {
        let dir = tempfile::tempdir().unwrap();
        let examples: Vec<ExtractedExample> = (0..10)
            .map(|k| {
                let seq = match k {
                    0..=5 => "s_train",
                    6 | 7 => "s_val",
                    _ => "s_test",
                };
                ExtractedExample { meta: meta(seq, k), example: tiny_example() }
            })
            .collect();
        let mut table = BTreeMap::new();
        table.insert("s_train".to_string(), Split::Train);
        table.insert("s_val".to_string(), Split::Val);
        table.insert("s_test".to_string(), Split::Test);
        let splits = SplitTable(table);

        let manifest =
            write_dataset(&examples, &splits, dir.path(), &Config::default()).unwrap();
        assert_eq!(manifest.split_counts["train"], 6);
        assert_eq!(manifest.split_counts["val"], 2);
        assert_eq!(manifest.split_counts["test"], 2);
        assert_eq!(fs::read_dir(dir.path().join("train")).unwrap().count(), 6);
        assert!(dir.path().join("manifest.json").is_file());

        let loaded = read_manifest(dir.path()).unwrap();
        assert_eq!(loaded, manifest);
    }

    #[test]
    fn missing_split_names_the_sequence() {
        let dir = tempfile::tempdir().unwrap();
        let examples =
            vec![ExtractedExample { meta: meta("s_orphan", 0), example: tiny_example() }];
        let splits = SplitTable::default();
        match write_dataset(&examples, &splits, dir.path(), &Config::default()).unwrap_err() {
            DatasetError::MissingSplit(seq) => assert_eq!(seq, "s_orphan"),
            other => panic!("expected missing split, got {other:?}"),
        }
    }

    #[test]
    fn rewriting_gives_identical_tree_digest() {
        let examples: Vec<ExtractedExample> =
            (0..4).map(|k| ExtractedExample { meta: meta("s", k), example: tiny_example() }).collect();
        let splits = SplitTable(BTreeMap::from([("s".to_string(), Split::Train)]));

        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        write_dataset(&examples, &splits, d1.path(), &Config::default()).unwrap();
        write_dataset(&examples, &splits, d2.path(), &Config::default()).unwrap();
        assert_eq!(tree_digest(d1.path()).unwrap(), tree_digest(d2.path()).unwrap());
    }

    #[test]
    fn stats_flag_corrupt_records_but_count_the_rest() {
        let dir = tempfile::tempdir().unwrap();
        let examples: Vec<ExtractedExample> =
            (0..3).map(|k| ExtractedExample { meta: meta("s", k), example: tiny_example() }).collect();
        let splits = SplitTable(BTreeMap::from([("s".to_string(), Split::Train)]));
        write_dataset(&examples, &splits, dir.path(), &Config::default()).unwrap();
        fs::write(dir.path().join("train").join("broken.nstp"), b"NSTPgarbage").unwrap();

        let stats = dataset_stats(dir.path()).unwrap();
        assert_eq!(stats.examples_total, 3);
        assert_eq!(stats.corrupt_total, 1);
        assert_eq!(stats.per_split["train"].corrupt, vec!["broken.nstp".to_string()]);
        assert_eq!(stats.node_count_min, 3);
        assert_eq!(stats.node_count_max, 3);
        assert!((stats.per_type_mean["SceneParticipant"] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_directory_reports_zero() {
        let dir = tempfile::tempdir().unwrap();
        let stats = dataset_stats(dir.path()).unwrap();
        assert_eq!(stats.examples_total, 0);
        assert_eq!(stats.node_count_min, 0);
    }

    #[test]
    fn schema_digest_is_stable_and_self_consistent() {
        let a = feature_schema();
        let b = feature_schema();
        assert_eq!(a.digest(), b.digest());
        assert!(a.columns.contains_key("SceneParticipant"));
        assert_eq!(a.index_tables["participant_category"].len(), 23);
        assert_eq!(a.index_tables["divider_type"].len(), 8);
        assert_eq!(a.index_tables["stop_area_subtype"].len(), 5);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_example() -> impl Strategy<Value = HetGraphExample> {
            (
                proptest::collection::vec(-500.0f64..500.0, 6..60),
                proptest::collection::vec((0u32..8, 0u32..8), 0..30),
                proptest::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 12),
            )
                .prop_map(|(features, pairs, y)| {
                    let rows = (features.len() / 6) as u32;
                    let mut nodes = BTreeMap::new();
                    nodes.insert(
                        "SceneParticipant".to_string(),
                        FeatureTable {
                            cols: 6,
                            rows,
                            data: features[..(rows as usize * 6)].to_vec(),
                        },
                    );
                    let mut edges = BTreeMap::new();
                    let clipped: Vec<[u32; 2]> = pairs
                        .iter()
                        .map(|&(a, b)| [a.min(rows - 1), b.min(rows - 1)])
                        .collect();
                    if !clipped.is_empty() {
                        edges.insert(
                            (
                                "SceneParticipant".to_string(),
                                "inNextScene".to_string(),
                                "SceneParticipant".to_string(),
                            ),
                            clipped,
                        );
                    }
                    HetGraphExample {
                        nodes,
                        edges,
                        target: ("SceneParticipant".to_string(), 0),
                        y: y.iter().map(|&(a, b)| [a, b]).collect(),
                    }
                })
        }

        proptest! {
            #[test]
            fn write_read_is_quantization_fixed_point(ex in arb_example()) {
                let mut buf = Vec::new();
                write_example(&ex, &mut buf).unwrap();
                let once = read_example(buf.as_slice()).unwrap();
                prop_assert_eq!(&once, &ex.quantized());

                let mut buf2 = Vec::new();
                write_example(&once, &mut buf2).unwrap();
                prop_assert_eq!(&buf, &buf2);
                let twice = read_example(buf2.as_slice()).unwrap();
                prop_assert_eq!(&twice, &once);
            }
        }
    }
}
