from pydantic import BaseModel


class CqBaseModel(BaseModel):
    model_config = {"frozen": True}
