"""
Gestionnaire des atlas stockés.
"""
import json
import logging
import os
from typing import Dict, List, Optional

from .chart_complex import ChartComplex, validate
from .config import data_dir
from .errors import ParseError
from .serialization import atlas_from_document, dumps

logger = logging.getLogger(__name__)


class AtlasManager:
    """Gestionnaire pour les atlas JSON (un fichier par atlas)."""

    def __init__(self, atlas_dir: Optional[str] = None):
        """
        Initialise le gestionnaire d'atlas.

        Args:
            atlas_dir (str): Répertoire des documents; par défaut celui de la configuration
        """
        self.atlas_dir = atlas_dir if atlas_dir is not None else data_dir()
        os.makedirs(self.atlas_dir, exist_ok=True)

    def _path(self, name: str) -> str:
        if not name or "/" in name or "\\" in name or name.startswith("."):
            raise ParseError(f"Nom d'atlas invalide: {name!r}", witness={"name": name})
        return os.path.join(self.atlas_dir, f"{name}.json")

    def list_atlases(self) -> List[Dict]:
        """
        Liste les atlas valides du répertoire.

        Returns:
            List[Dict]: Nom, système de racines, rang du groupe et cartes de chaque atlas
        """
        found = []
        for filename in sorted(os.listdir(self.atlas_dir)):
            if not filename.endswith(".json"):
                continue
            name = filename[: -len(".json")]
            document = self.load_document(name)
            if not isinstance(document, dict) or "charts" not in document:
                continue
            found.append(
                {
                    "name": name,
                    "root_system": document.get("root_system"),
                    "group_rank": document.get("group_rank"),
                    "charts": document.get("charts"),
                }
            )
        return found

    def load_document(self, name: str) -> Optional[Dict]:
        """
        Charge le document JSON d'un atlas.

        Returns:
            Optional[Dict]: Le document, ou None s'il n'existe pas ou est illisible
        """
        path = self._path(name)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("Erreur lors du chargement de l'atlas %s: %s", name, e)
            return None

    def load_atlas(self, name: str) -> Optional[ChartComplex]:
        """Atlas analysé et validé, ou None s'il n'existe pas."""
        document = self.load_document(name)
        if document is None:
            return None
        return validate(atlas_from_document(document))

    def save_atlas(self, name: str, document: Dict) -> Dict:
        """
        Valide puis enregistre un nouvel atlas.

        Raises:
            ValueError: Si un atlas du même nom existe déjà ou si le document est invalide
        """
        path = self._path(name)
        if os.path.exists(path):
            raise ValueError(f"Un atlas avec le nom '{name}' existe déjà")
        cc = validate(atlas_from_document(document))
        with open(path, "w", encoding="utf-8") as f:
            f.write(dumps(document))
        logger.info("Atlas %s enregistré (%d cartes)", name, len(cc.charts))
        return {"name": name, **cc.to_summary()}

    def delete_atlas(self, name: str) -> bool:
        """
        Supprime un atlas.

        Returns:
            bool: True si supprimé, False si non trouvé
        """
        path = self._path(name)
        if not os.path.exists(path):
            return False
        os.remove(path)
        return True


# Instance globale pour faciliter l'utilisation
atlas_manager = AtlasManager()
