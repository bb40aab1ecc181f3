//! Starts the service on a copy of the annotated fixture and walks through
//! an annotation session: read, annotate with a version, lose a race,
//! add a triple, emit the graph and query it.
use std::path::Path;

use serde_json::{json, Value};

const ID: &str = "carl-robot";
const U1: &str = "85c27957-9b18-497e-9557-761b02bdbc21";

fn copy_dir(src: &Path, dst: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dst)?;
    for entry in std::fs::read_dir(src)? {
        let entry = entry?;
        let to = dst.join(entry.file_name());
        if entry.file_type()?.is_dir() {
            copy_dir(&entry.path(), &to)?;
        } else {
            std::fs::copy(entry.path(), &to)?;
        }
    }
    Ok(())
}

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = tempfile::tempdir()?;
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/annotated")
        .join(ID);
    copy_dir(&fixture, &root.path().join(ID))?;
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let base = format!("http://{}", listener.local_addr()?);
    tokio::spawn(emissor_server::serve(listener, root.path().to_path_buf()));
    let http = reqwest::Client::new();
    println!("serving {} at {base}", root.path().display());

    let r = http.get(format!("{base}/scenarios/{ID}")).send().await?;
    let version = r.headers()["etag"].to_str()?.to_string();
    println!("GET scenario -> {} version {version}", r.status());

    let mention = json!({
        "segments": [{ "type": "Index", "start": 15, "stop": 23 }],
        "annotations": [{ "type": "label", "value": "medication", "source": "walkthrough" }],
    });
    let url = format!("{base}/scenarios/{ID}/signals/{U1}/mentions");
    let r = http
        .post(&url)
        .header("if-match", &version)
        .json(&mention)
        .send()
        .await?;
    println!(
        "POST mention -> {} version {}",
        r.status(),
        r.headers()["etag"].to_str()?
    );

    // Same stale version again: another annotator got there first.
    let r = http
        .post(&url)
        .header("if-match", &version)
        .json(&mention)
        .send()
        .await?;
    let body: Value = r.json().await?;
    println!("POST with stale version -> {} {}", body["status"], body["error"]);

    let r = http
        .post(format!("{base}/scenarios/{ID}/triples"))
        .json(&json!({
            "signal": U1,
            "segments": [{ "type": "Index", "start": 0, "stop": 22 }],
            "subject": "robotFriends:carl",
            "predicate": "robotMu:need",
            "object": "robotWorld:pills",
            "perspective": { "certainty": "CERTAIN", "polarity": "POSITIVE" },
        }))
        .send()
        .await?;
    let body: Value = r.json().await?;
    println!("POST triple -> claim {}", body["claim"]);

    let body: Value = http
        .post(format!("{base}/scenarios/{ID}/emit"))
        .send()
        .await?
        .json()
        .await?;
    println!("POST emit -> {} quads added to {}", body["added"], body["file"]);

    let results: Value = http
        .get(format!(
            "{base}/scenarios/{ID}/query?s=pills&p=locatedUnder&t=4000&source=Leolani"
        ))
        .send()
        .await?
        .json()
        .await?;
    for r in results.as_array().into_iter().flatten() {
        println!("query -> {} {} {}", r["object"], r["polarity"], r["perspective"]);
    }
    let groups: Value = http
        .get(format!("{base}/scenarios/{ID}/conflicts"))
        .send()
        .await?
        .json()
        .await?;
    println!("{} conflict groups", groups.as_array().map_or(0, Vec::len));
    Ok(())
}
