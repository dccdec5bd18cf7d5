//! Dataset inventory and split sampling.
//!
//! A manifest lists (subject, group, patch image, ground-truth mask) rows.
//! It can be scanned from a directory tree laid out as
//! `root/<group>/<subject>/<img>/<patch>` with masks in a sibling directory,
//! pairing patch and mask by file stem, or read from its CSV form. Splits
//! select subjects per group and patches per subject with ceil-rounded
//! fractions, sampled without replacement from a seeded generator, so a
//! split is a pure function of (manifest, split letter, seed).

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};

/// Mouse-model group. String forms are the directory and CSV spellings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    Normal,
    FiveSixNx,
    Dn,
    Nep25,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Normal, Group::FiveSixNx, Group::Dn, Group::Nep25];

    pub fn as_str(self) -> &'static str {
        match self {
            Group::Normal => "normal",
            Group::FiveSixNx => "56Nx",
            Group::Dn => "DN",
            Group::Nep25 => "NEP25",
        }
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normal" => Ok(Group::Normal),
            "56Nx" => Ok(Group::FiveSixNx),
            "DN" => Ok(Group::Dn),
            "NEP25" => Ok(Group::Nep25),
            other => Err(Error::UnknownGroup(other.to_string())),
        }
    }
}

/// One patch image paired with its ground-truth mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifestEntry {
    pub subject_id: String,
    pub group: Group,
    pub patch_path: PathBuf,
    pub mask_path: PathBuf,
}

impl ManifestEntry {
    fn sort_key(&self) -> (&'static str, &str, &Path) {
        (self.group.as_str(), &self.subject_id, &self.patch_path)
    }
}

/// Sorted inventory with unique (subject, patch) rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    entries: Vec<ManifestEntry>,
}

impl Manifest {
    /// Sorts by (group, subject, patch) and rejects duplicate
    /// (subject, patch) pairs.
    pub fn from_entries(mut entries: Vec<ManifestEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert((e.subject_id.clone(), e.patch_path.clone())) {
                return Err(Error::InvalidManifest {
                    path: e.patch_path.clone(),
                    line: 0,
                    reason: format!("duplicate entry for subject `{}`", e.subject_id),
                });
            }
        }
        Ok(Manifest { entries })
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Split letter naming a (subject fraction, patch fraction) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitId {
    A,
    B,
    C,
    D,
}

impl SplitId {
    /// ((subject numerator, denominator), (patch numerator, denominator)).
    fn fractions(self) -> ((usize, usize), (usize, usize)) {
        match self {
            SplitId::A => ((1, 2), (1, 1)),
            SplitId::B => ((1, 1), (1, 2)),
            SplitId::C => ((1, 2), (1, 2)),
            SplitId::D => ((1, 1), (1, 4)),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SplitId::A => "A",
            SplitId::B => "B",
            SplitId::C => "C",
            SplitId::D => "D",
        }
    }
}

impl std::str::FromStr for SplitId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(SplitId::A),
            "B" | "b" => Ok(SplitId::B),
            "C" | "c" => Ok(SplitId::C),
            "D" | "d" => Ok(SplitId::D),
            other => Err(Error::UnknownSplit(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SplitSpec {
    pub split: SplitId,
    pub seed: u64,
}

/// Directory names holding patches and masks under each subject.
#[derive(Clone, Debug)]
pub struct LayoutSpec {
    pub img_dir: String,
    pub mask_dir: String,
}

impl Default for LayoutSpec {
    fn default() -> Self {
        LayoutSpec {
            img_dir: "img".to_string(),
            mask_dir: "mask".to_string(),
        }
    }
}

const MANIFEST_HEADER: [&str; 4] = ["subject_id", "group", "patch_path", "mask_path"];

/// Writes the manifest as CSV: `subject_id,group,patch_path,mask_path`,
/// UTF-8, LF endings, rows in manifest order (already sorted).
pub fn write_manifest(manifest: &Manifest, path: &Path) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(MANIFEST_HEADER)
        .map_err(|e| csv_io(path, e))?;
    for e in manifest.entries() {
        let patch = path_str(&e.patch_path)?;
        let mask = path_str(&e.mask_path)?;
        wtr.write_record([e.subject_id.as_str(), e.group.as_str(), patch, mask])
            .map_err(|e| csv_io(path, e))?;
    }
    let bytes = wtr.into_inner().map_err(|e| Error::InvalidManifest {
        path: path.to_path_buf(),
        line: 0,
        reason: e.to_string(),
    })?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_io(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_io(path, e))?;
    if headers.iter().ne(MANIFEST_HEADER) {
        return Err(Error::InvalidManifest {
            path: path.to_path_buf(),
            line: 1,
            reason: format!(
                "unexpected header `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut entries = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_io(path, e))?;
        if record.len() != 4 {
            return Err(Error::InvalidManifest {
                path: path.to_path_buf(),
                line: idx as u64 + 2,
                reason: format!("expected 4 fields, got {}", record.len()),
            });
        }
        entries.push(ManifestEntry {
            subject_id: record[0].to_string(),
            group: record[1].parse()?,
            patch_path: PathBuf::from(&record[2]),
            mask_path: PathBuf::from(&record[3]),
        });
    }
    Manifest::from_entries(entries)
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::InvalidManifest {
            path: path.to_path_buf(),
            line: 0,
            reason: format!("{other:?}"),
        },
    }
}

fn path_str(path: &Path) -> Result<&str> {
    path.to_str()
        .ok_or_else(|| Error::NonUtf8Path(path.to_path_buf()))
}

/// Walks `root/<group>/<subject>/{img,mask}` and pairs patches with masks by
/// file stem. Unknown group directories, unpaired files, and non-UTF-8 names
/// become warnings; two files with the same stem in one directory are an
/// error because the pairing would be ambiguous.
pub fn scan_manifest(root: &Path, layout: &LayoutSpec) -> Result<(Manifest, Vec<String>)> {
    let mut entries = Vec::new();
    let mut warnings = Vec::new();

    for group_dir in sorted_dirs(root)? {
        let name = match group_dir.file_name().and_then(|n| n.to_str()) {
            Some(n) => n.to_string(),
            None => {
                warnings.push(format!(
                    "skipping non-UTF-8 directory name under {}",
                    root.display()
                ));
                continue;
            }
        };
        let group: Group = match name.parse() {
            Ok(g) => g,
            Err(_) => {
                warnings.push(format!("skipping unknown group directory `{name}`"));
                continue;
            }
        };
        for subject_dir in sorted_dirs(&group_dir)? {
            let subject = match subject_dir.file_name().and_then(|n| n.to_str()) {
                Some(n) => n.to_string(),
                None => {
                    warnings.push(format!(
                        "skipping non-UTF-8 subject name under {}",
                        group_dir.display()
                    ));
                    continue;
                }
            };
            let img_dir = subject_dir.join(&layout.img_dir);
            if !img_dir.is_dir() {
                warnings.push(format!(
                    "subject `{subject}` has no `{}` directory",
                    layout.img_dir
                ));
                continue;
            }
            let imgs = files_by_stem(&img_dir, &mut warnings)?;
            let mask_dir = subject_dir.join(&layout.mask_dir);
            let masks = if mask_dir.is_dir() {
                files_by_stem(&mask_dir, &mut warnings)?
            } else {
                BTreeMap::new()
            };
            for (stem, patch_path) in &imgs {
                match masks.get(stem) {
                    Some(mask_path) => entries.push(ManifestEntry {
                        subject_id: subject.clone(),
                        group,
                        patch_path: patch_path.clone(),
                        mask_path: mask_path.clone(),
                    }),
                    None => warnings.push(format!("no mask for `{}`", patch_path.display())),
                }
            }
            for (stem, mask_path) in &masks {
                if !imgs.contains_key(stem) {
                    warnings.push(format!("no image for mask `{}`", mask_path.display()));
                }
            }
        }
    }

    Ok((Manifest::from_entries(entries)?, warnings))
}

fn sorted_dirs(path: &Path) -> Result<Vec<PathBuf>> {
    let mut dirs = Vec::new();
    for entry in std::fs::read_dir(path).map_err(|e| Error::io(path, e))? {
        let entry = entry.map_err(|e| Error::io(path, e))?;
        if entry.path().is_dir() {
            dirs.push(entry.path());
        }
    }
    dirs.sort();
    Ok(dirs)
}

fn files_by_stem(dir: &Path, warnings: &mut Vec<String>) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if entry.path().is_file() {
            files.push(entry.path());
        }
    }
    files.sort();
    for path in files {
        let Some(name) = path.file_name().and_then(|n| n.to_str()) else {
            warnings.push(format!(
                "skipping non-UTF-8 file name under {}",
                dir.display()
            ));
            continue;
        };
        let lower = name.to_ascii_lowercase();
        let Some(stem) = lower
            .strip_suffix(".png")
            .or_else(|| lower.strip_suffix(".pgm"))
        else {
            continue;
        };
        if out.insert(stem.to_string(), path.clone()).is_some() {
            return Err(Error::AmbiguousPairing {
                dir: dir.to_path_buf(),
                key: stem.to_string(),
            });
        }
    }
    Ok(out)
}

fn ceil_frac(n: usize, num: usize, den: usize) -> usize {
    (n * num).div_ceil(den)
}

/// First-k simple random sample, order-preserving over the input.
fn sample_without_replacement<T: Clone>(items: &[T], k: usize, rng: &mut ChaCha12Rng) -> Vec<T> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    let k = k.min(items.len());
    for i in 0..k {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
    }
    let mut chosen: Vec<usize> = idx[..k].to_vec();
    chosen.sort_unstable();
    chosen.into_iter().map(|i| items[i].clone()).collect()
}

/// Samples the split: per group, ceil(fraction × subjects) subjects; per
/// retained subject, ceil(fraction × patches) patches; all without
/// replacement. Groups, then subjects, are visited in sorted order so a
/// fixed seed always selects the same rows.
pub fn make_split(manifest: &Manifest, spec: &SplitSpec) -> Result<Manifest> {
    if manifest.is_empty() {
        return Err(Error::EmptyManifest);
    }
    let ((s_num, s_den), (p_num, p_den)) = spec.split.fractions();
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);

    let mut by_group: BTreeMap<&'static str, BTreeMap<&str, Vec<&ManifestEntry>>> = BTreeMap::new();
    for e in manifest.entries() {
        by_group
            .entry(e.group.as_str())
            .or_default()
            .entry(e.subject_id.as_str())
            .or_default()
            .push(e);
    }

    let mut selected = Vec::new();
    for subjects in by_group.values() {
        let names: Vec<&str> = subjects.keys().copied().collect();
        let take = ceil_frac(names.len(), s_num, s_den);
        for name in sample_without_replacement(&names, take, &mut rng) {
            let patches = &subjects[name];
            let take = ceil_frac(patches.len(), p_num, p_den);
            for entry in sample_without_replacement(patches, take, &mut rng) {
                selected.push(entry.clone());
            }
        }
    }
    Manifest::from_entries(selected)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(groups: &[Group], subjects: usize, patches: usize) -> Manifest {
        let mut entries = Vec::new();
        for g in groups {
            for s in 0..subjects {
                for p in 0..patches {
                    let subject = format!("subj{s:02}");
                    entries.push(ManifestEntry {
                        subject_id: subject.clone(),
                        group: *g,
                        patch_path: PathBuf::from(format!(
                            "{}/{subject}/img/patch{p:02}.png",
                            g.as_str()
                        )),
                        mask_path: PathBuf::from(format!(
                            "{}/{subject}/mask/patch{p:02}.png",
                            g.as_str()
                        )),
                    });
                }
            }
        }
        Manifest::from_entries(entries).unwrap()
    }

    #[test]
    fn group_strings_round_trip() {
        for g in Group::ALL {
            assert_eq!(g.as_str().parse::<Group>().unwrap(), g);
        }
        assert!(matches!(
            "Normal".parse::<Group>(),
            Err(Error::UnknownGroup(_))
        ));
    }

    #[test]
    fn entries_are_sorted_and_unique() {
        let m = fixture(&[Group::Nep25, Group::Normal], 2, 2);
        let keys: Vec<_> = m.entries().iter().map(|e| e.sort_key()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        let dup = vec![m.entries()[0].clone(), m.entries()[0].clone()];
        assert!(Manifest::from_entries(dup).is_err());
    }

    #[test]
    fn split_counts_follow_the_ceil_rule() {
        // 2 groups x 3 subjects x 4 patches
        let m = fixture(&[Group::Normal, Group::Dn], 3, 4);
        let counts = |id: SplitId| {
            make_split(
                &m,
                &SplitSpec {
                    split: id,
                    seed: 99,
                },
            )
            .unwrap()
            .len()
        };
        assert_eq!(counts(SplitId::A), 2 * 2 * 4); // ceil(3/2)=2 subjects, all patches
        assert_eq!(counts(SplitId::B), 2 * 3 * 2); // all subjects, ceil(4/2)=2 patches
        assert_eq!(counts(SplitId::C), 2 * 2 * 2);
        assert_eq!(counts(SplitId::D), 2 * 3); // ceil(4/4)=1 patch each
    }

    #[test]
    fn split_output_is_a_subset_of_the_input() {
        let m = fixture(&[Group::FiveSixNx], 2, 3);
        let out = make_split(
            &m,
            &SplitSpec {
                split: SplitId::B,
                seed: 1,
            },
        )
        .unwrap();
        // B keeps all subjects; with 3 patches it keeps ceil(1.5)=2 of 3
        assert_eq!(out.len(), 4);
        for e in out.entries() {
            assert!(m.entries().contains(e));
        }
    }

    #[test]
    fn ceil_keeps_single_patch_subjects_intact() {
        // one patch per subject: every split degenerates to the identity
        let m = fixture(&Group::ALL, 2, 1);
        for id in [SplitId::B, SplitId::D] {
            let out = make_split(&m, &SplitSpec { split: id, seed: 3 }).unwrap();
            assert_eq!(out, m);
        }
    }

    #[test]
    fn split_is_seed_deterministic() {
        let m = fixture(&Group::ALL, 4, 10);
        let spec = SplitSpec {
            split: SplitId::C,
            seed: 7,
        };
        let a = make_split(&m, &spec).unwrap();
        let b = make_split(&m, &spec).unwrap();
        assert_eq!(a, b);
        let c = make_split(
            &m,
            &SplitSpec {
                split: SplitId::C,
                seed: 8,
            },
        )
        .unwrap();
        assert_eq!(a.len(), c.len());
        assert_ne!(a, c);
    }

    #[test]
    fn empty_manifest_split_is_an_error() {
        let m = Manifest::default();
        let spec = SplitSpec {
            split: SplitId::A,
            seed: 0,
        };
        assert!(matches!(make_split(&m, &spec), Err(Error::EmptyManifest)));
    }

    #[test]
    fn manifest_csv_round_trips() {
        let m = fixture(&[Group::Normal, Group::Nep25], 2, 2);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("manifest.csv");
        write_manifest(&m, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("subject_id,group,patch_path,mask_path\n"));
        assert!(!text.contains('\r'));
        assert_eq!(read_manifest(&path).unwrap(), m);
    }

    #[test]
    fn scan_pairs_images_with_masks_and_warns_on_orphans() {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path();
        let subj = root.join("normal/s1");
        std::fs::create_dir_all(subj.join("img")).unwrap();
        std::fs::create_dir_all(subj.join("mask")).unwrap();
        for name in ["a.png", "b.png", "orphan.png"] {
            std::fs::write(subj.join("img").join(name), b"x").unwrap();
        }
        for name in ["a.png", "b.png"] {
            std::fs::write(subj.join("mask").join(name), b"x").unwrap();
        }
        std::fs::create_dir_all(root.join("mystery")).unwrap();

        let (manifest, warnings) = scan_manifest(root, &LayoutSpec::default()).unwrap();
        assert_eq!(manifest.len(), 2);
        assert_eq!(warnings.len(), 2);
        assert!(warnings.iter().any(|w| w.contains("orphan")));
        assert!(warnings.iter().any(|w| w.contains("mystery")));
    }

    #[test]
    fn scan_rejects_ambiguous_stems() {
        let dir = tempfile::tempdir().unwrap();
        let img = dir.path().join("normal/s1/img");
        std::fs::create_dir_all(&img).unwrap();
        std::fs::write(img.join("a.png"), b"x").unwrap();
        std::fs::write(img.join("a.pgm"), b"x").unwrap();
        let err = scan_manifest(dir.path(), &LayoutSpec::default()).unwrap_err();
        assert!(matches!(err, Error::AmbiguousPairing { key, .. } if key == "a"));
    }

    #[test]
    fn scan_of_empty_root_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        let (manifest, warnings) = scan_manifest(dir.path(), &LayoutSpec::default()).unwrap();
        assert!(manifest.is_empty());
        assert!(warnings.is_empty());
    }
}
