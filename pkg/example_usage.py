#!/usr/bin/env python3
"""
Exemple d'utilisation de l'API Lambda Buildings.

Ce script montre comment utiliser l'API pour :
1. Enregistrer un atlas (le tripode sur Λ = ℚ²)
2. Calculer des distances et vérifier les axiomes
3. Changer de groupe de base et trouver un point fixe
"""
import json
import os

import requests

# Configuration
API_BASE_URL = "http://localhost:8080"
DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def load_example(name):
    """Charge un document JSON du répertoire data/."""
    with open(os.path.join(DATA_DIR, name), "r", encoding="utf-8") as f:
        return json.load(f)


def example_workflow():
    """Démontre un workflow complet."""
    print("🎯 Exemple d'utilisation de l'API Lambda Buildings")
    print("=" * 60)

    try:
        # 1. Vérifier que l'API est accessible
        print("\n1️⃣  Vérification de l'API...")
        response = requests.get(f"{API_BASE_URL}/")
        if response.status_code != 200:
            print("❌ L'API n'est pas accessible. Démarrez-la avec: uvicorn api.main:app --reload")
            return
        print("✅ API accessible")

        # 2. Enregistrer l'atlas
        print("\n2️⃣  Enregistrement de l'atlas 'tripode'...")
        atlas = load_example("tripod.json")
        response = requests.post(
            f"{API_BASE_URL}/atlases",
            data={"name": "tripode", "atlas": json.dumps(atlas)}
        )
        if response.status_code == 200:
            print(f"✅ Atlas enregistré: {response.json()['atlas']['charts']}")
        elif response.status_code == 400:
            print("ℹ️  L'atlas existe déjà, on continue")
        else:
            print(f"❌ Erreur lors de l'enregistrement: {response.text}")
            return

        # 3. Distance entre deux points d'une même carte
        print("\n3️⃣  Distance entre A:(-1, 0) et A:(2, 0)...")
        response = requests.post(
            f"{API_BASE_URL}/distance",
            data={
                "atlas_name": "tripode",
                "p": 'A:[["-1/1","0/1"]]',
                "q": 'A:[["2/1","0/1"]]'
            }
        )
        if response.status_code == 200:
            print(f"✅ Distance: {response.json()['distance']}")
        else:
            print(f"❌ Erreur: {response.text}")
            return

        # 4. Vérification des axiomes sur des points témoins
        print("\n4️⃣  Vérification des axiomes...")
        response = requests.post(
            f"{API_BASE_URL}/check-axioms",
            data={
                "atlas_name": "tripode",
                "witnesses": json.dumps(load_example("tripod-witnesses.json"))
            }
        )
        if response.status_code == 200:
            result = response.json()
            print(f"✅ Tous les axiomes passent: {'Oui' if result['passed'] else 'Non'}")
            for axiom, verdict in sorted(result["report"].items()):
                if axiom != "witnesses":
                    print(f"   {axiom}: {verdict}")
        else:
            print(f"❌ Erreur: {response.text}")

        # 5. Changement de base ℚ² → ℚ
        print("\n5️⃣  Troncature de Λ = ℚ² vers ℚ...")
        response = requests.post(
            f"{API_BASE_URL}/basechange",
            data={"atlas_name": "tripode", "morphism": json.dumps({"epi_keep": 1})}
        )
        if response.status_code == 200:
            result = response.json()
            print(f"✅ Classes à l'infini: {result['source_boundary_classes']} → {result['boundary_classes']}")
        else:
            print(f"❌ Erreur: {response.text}")

        # 6. Point fixe de la rotation d'ordre 3
        print("\n6️⃣  Point fixe de la rotation des trois branches...")
        response = requests.post(
            f"{API_BASE_URL}/fixed-point",
            data={
                "atlas_name": "tripode",
                "generators": json.dumps(load_example("tripod-rotation.json")),
                "x0": 'A:[["-2/1","0/1"]]'
            }
        )
        if response.status_code == 200:
            result = response.json()
            print(f"✅ Point fixe: {result['point']}")
            for layer in result["trace"]:
                print(f"   Couche {layer['leading_index']}: orbite de {layer['orbit_size']} points, g0 = {layer['g0']}")
        else:
            print(f"❌ Erreur: {response.text}")

        print("\n🎉 Exemple terminé avec succès !")
        print("   Consultez la doc interactive sur http://localhost:8080/docs")

    except requests.exceptions.ConnectionError:
        print("❌ Impossible de se connecter à l'API")
        print("💡 Démarrez l'API avec: uvicorn api.main:app --reload")
    except Exception as e:
        print(f"❌ Erreur inattendue: {e}")


if __name__ == "__main__":
    example_workflow()
